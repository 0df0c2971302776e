#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "ramus_cli/config.hpp"

#include "ramus/errors.hpp"
#include "ramus/geometry.hpp"
#include "ramus/leadfield.hpp"

namespace ramus_cli {

namespace {

ramus::LeadField build_forward_model(const ramus::ExperimentSetup& setup, ramus::Modality m) {
    const ramus::SourceSpace space =
        ramus::generate_source_space(setup.source_count, setup.source_radius_mm,
                                     setup.source_seed);
    if (m == ramus::Modality::eeg || m == ramus::Modality::combined) {
        const ramus::SensorArray electrodes = ramus::build_upper_hemisphere_sensors(
            setup.sensor_count, setup.sensor_radius_mm, ramus::SensorKind::eeg);
        ramus::LeadField eeg =
            ramus::eeg_sphere_leadfield(space, electrodes, setup.conductivity_s_per_m,
                                        setup.head_radius_mm, setup.series_terms);
        if (m == ramus::Modality::eeg) return eeg;
        const ramus::SensorArray magnetometers = ramus::build_upper_hemisphere_sensors(
            setup.sensor_count, setup.sensor_radius_mm * setup.meg_radius_factor,
            ramus::SensorKind::meg_radial);
        const ramus::LeadField meg = ramus::meg_radial_leadfield(space, magnetometers);
        ramus::CombinedMeasurement combined =
            ramus::combine_emeg(eeg, meg, Eigen::VectorXd::Zero(eeg.rows()),
                                Eigen::VectorXd::Zero(meg.rows()));
        return combined.lf;
    }
    const ramus::SensorArray magnetometers = ramus::build_upper_hemisphere_sensors(
        setup.sensor_count, setup.sensor_radius_mm * setup.meg_radius_factor,
        ramus::SensorKind::meg_radial);
    return ramus::meg_radial_leadfield(space, magnetometers);
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ramus::format_error("cannot open '" + path.string() + "' for writing");
    out << content;
    if (!out) throw ramus::format_error("failed writing '" + path.string() + "'");
}

int run_pipeline(const RunConfig& cfg) {
    ramus::CasePreset preset = cfg.case_id ? ramus::case_preset(*cfg.case_id) : cfg.custom;

    std::optional<ramus::LeadField> from_file;
    if (!cfg.leadfield_path.empty()) from_file = ramus::load_leadfield(cfg.leadfield_path);

    const ramus::CaseResult result =
        ramus::run_case(preset, cfg.setup, from_file ? &*from_file : nullptr);
    if (result.leadfield_truncation_warning)
        std::cerr << "warning: potential series truncation tolerance not met; "
                     "consider raising --series-terms\n";

    // The manifest reflects what actually ran: for run-case the preset row
    // replaces the individual field defaults (still marked default, since the
    // user set none of them directly).
    RunConfig as_run = cfg;
    as_run.custom = preset;

    const std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    write_text_file(dir / "metrics.csv", ramus::metrics_csv(result));
    write_text_file(dir / "summary.json", ramus::summary_json(result));
    write_text_file(dir / "manifest.txt", manifest_text(as_run, result.wall_seconds));
    for (const auto& [name, content] : ramus::histogram_files(result))
        write_text_file(dir / name, content);

    std::cout << "case " << preset.id << ": " << result.realizations.size()
              << " realizations in " << result.wall_seconds << " s\n"
              << "  superficial: detection " << result.superficial.detection_rate_pct
              << "%, median position error " << result.superficial.position_error.median
              << " mm, median angle error " << result.superficial.angle_error.median << " deg\n"
              << "  deep:        detection " << result.deep.detection_rate_pct
              << "%, median position error " << result.deep.position_error.median
              << " mm, median angle error " << result.deep.angle_error.median << " deg\n"
              << "outputs in " << dir.string() << "\n";
    return 0;
}

} // namespace

int execute(const RunConfig& cfg) {
    switch (cfg.command) {
        case Command::generate_leadfield: {
            cfg.setup.validate();
            const ramus::LeadField lf = build_forward_model(cfg.setup, cfg.custom.modality);
            if (lf.truncation_warning)
                std::cerr << "warning: potential series truncation tolerance not met; "
                             "consider raising --series-terms\n";
            ramus::save_leadfield(lf, cfg.leadfield_path, cfg.binary_leadfield);
            std::cout << "wrote " << lf.rows() << "x" << lf.cols() << " lead field to "
                      << cfg.leadfield_path << "\n";
            return 0;
        }
        case Command::inspect: {
            const ramus::LeadField lf = ramus::load_leadfield(cfg.leadfield_path);
            const char* modality = lf.modality == ramus::Modality::eeg       ? "EEG"
                                   : lf.modality == ramus::Modality::meg     ? "MEG"
                                                                             : "COMBINED";
            std::cout << "file: " << cfg.leadfield_path << "\n"
                      << "modality: " << modality << "\n"
                      << "rows: " << lf.rows() << "\n"
                      << "cols: " << lf.cols() << " (" << lf.cols() / 3 << " sources)\n"
                      << "frobenius_norm: " << lf.matrix.norm() << "\n"
                      << "max_abs_entry: " << lf.matrix.cwiseAbs().maxCoeff() << "\n";
            return 0;
        }
        case Command::run_case:
        case Command::run_custom:
            return run_pipeline(cfg);
    }
    return 1;
}

} // namespace ramus_cli
