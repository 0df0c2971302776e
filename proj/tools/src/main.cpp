#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "ramus_cli/config.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    try {
        const ramus_cli::RunConfig cfg = ramus_cli::parse_config(args);
        return ramus_cli::execute(cfg);
    } catch (const ramus_cli::help_requested& help) {
        std::cout << help.text;
        return 0;
    } catch (const ramus_cli::usage_error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
