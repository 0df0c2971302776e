#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "ramus/errors.hpp"
#include "ramus/leadfield.hpp"

namespace ramus {
namespace {

const char* modality_token(Modality m) {
    switch (m) {
        case Modality::eeg: return "EEG";
        case Modality::meg: return "MEG";
        case Modality::combined: return "COMBINED";
    }
    throw parameter_error("save_leadfield: unknown modality");
}

Modality parse_modality(const std::string& token) {
    if (token == "EEG") return Modality::eeg;
    if (token == "MEG") return Modality::meg;
    if (token == "COMBINED") return Modality::combined;
    throw format_error("load_leadfield: unknown modality token '" + token + "'");
}

std::int64_t parse_header_field(const std::string& header, const std::string& key) {
    const auto pos = header.find(key + "=");
    if (pos == std::string::npos)
        throw format_error("load_leadfield: header missing '" + key + "='");
    std::int64_t value = 0;
    const char* begin = header.data() + pos + key.size() + 1;
    const char* end = header.data() + header.size();
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc())
        throw format_error("load_leadfield: malformed '" + key + "' field");
    return value;
}

} // namespace

void save_leadfield(const LeadField& lf, const std::filesystem::path& path, bool binary) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw format_error("save_leadfield: cannot open " + path.string());

    out << "LEADFIELD v1 rows=" << lf.rows() << " cols=" << lf.cols()
        << " modality=" << modality_token(lf.modality) << "\n";

    if (binary) {
        static_assert(std::endian::native == std::endian::little,
                      "binary lead-field format is little-endian");
        for (Eigen::Index i = 0; i < lf.rows(); ++i) {
            for (Eigen::Index j = 0; j < lf.cols(); ++j) {
                const double v = lf.matrix(i, j);
                out.write(reinterpret_cast<const char*>(&v), sizeof(double));
            }
        }
    } else {
        char buf[32];
        for (Eigen::Index i = 0; i < lf.rows(); ++i) {
            for (Eigen::Index j = 0; j < lf.cols(); ++j) {
                std::snprintf(buf, sizeof(buf), "%.17g", lf.matrix(i, j));
                if (j) out << ' ';
                out << buf;
            }
            out << '\n';
        }
    }
    if (!out) throw format_error("save_leadfield: write failed for " + path.string());
}

LeadField load_leadfield(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw format_error("load_leadfield: cannot open " + path.string());

    std::string header;
    if (!std::getline(in, header) || header.rfind("LEADFIELD v1 ", 0) != 0)
        throw format_error("load_leadfield: missing LEADFIELD v1 header in " + path.string());

    const std::int64_t rows = parse_header_field(header, "rows");
    const std::int64_t cols = parse_header_field(header, "cols");
    if (rows < 1 || cols < 3 || cols % 3 != 0)
        throw format_error("load_leadfield: invalid dimensions " + std::to_string(rows) + "x" +
                           std::to_string(cols));
    const auto mod_pos = header.find("modality=");
    if (mod_pos == std::string::npos) throw format_error("load_leadfield: header missing 'modality='");
    std::string mod_token = header.substr(mod_pos + 9);
    while (!mod_token.empty() && (mod_token.back() == '\r' || mod_token.back() == ' '))
        mod_token.pop_back();

    LeadField lf;
    lf.modality = parse_modality(mod_token);
    lf.matrix.resize(rows, cols);

    // The payload is binary exactly when its byte count matches the dense
    // double array; text payloads of 17-significant-digit floats are always
    // larger than 8 bytes per value.
    const auto payload_start = in.tellg();
    in.seekg(0, std::ios::end);
    const std::int64_t payload_bytes = static_cast<std::int64_t>(in.tellg() - payload_start);
    in.seekg(payload_start);

    if (payload_bytes == rows * cols * static_cast<std::int64_t>(sizeof(double))) {
        for (std::int64_t i = 0; i < rows; ++i) {
            for (std::int64_t j = 0; j < cols; ++j) {
                double v = 0.0;
                in.read(reinterpret_cast<char*>(&v), sizeof(double));
                if (!in) throw format_error("load_leadfield: truncated binary payload at row " +
                                            std::to_string(i));
                if (!std::isfinite(v))
                    throw format_error("load_leadfield: non-finite entry at row " + std::to_string(i) +
                                       " col " + std::to_string(j));
                lf.matrix(i, j) = v;
            }
        }
        return lf;
    }

    std::string line;
    for (std::int64_t i = 0; i < rows; ++i) {
        if (!std::getline(in, line))
            throw format_error("load_leadfield: expected " + std::to_string(rows) +
                               " data rows, file ends at row " + std::to_string(i));
        std::istringstream row(line);
        double v = 0.0;
        for (std::int64_t j = 0; j < cols; ++j) {
            if (!(row >> v))
                throw format_error("load_leadfield: row " + std::to_string(i) + " has fewer than " +
                                   std::to_string(cols) + " values");
            if (!std::isfinite(v))
                throw format_error("load_leadfield: non-finite entry at row " + std::to_string(i) +
                                   " col " + std::to_string(j));
            lf.matrix(i, j) = v;
        }
        if (row >> v)
            throw format_error("load_leadfield: row " + std::to_string(i) + " has more than " +
                               std::to_string(cols) + " values");
    }
    return lf;
}

} // namespace ramus
