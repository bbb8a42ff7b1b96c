#include <iostream>
#include <string>
#include <vector>

#include "kerr/scan.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    kerr::ParsedArgs parsed;
    try {
        parsed = kerr::parse_config(args);
    } catch (const kerr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }
    if (parsed.help_requested) {
        std::cout << parsed.help_text;
        return 0;
    }

    try {
        const kerr::ScanResult result = kerr::run_scan(parsed.config);
        const kerr::ScanSummary& s = result.summary;
        std::cout << "nu = " << kerr::format_double(s.nu)
                  << ", t_rev = " << kerr::format_double(s.t_rev) << '\n'
                  << "min uncertainty product = "
                  << kerr::format_double(s.min_uncertainty_product) << '\n';
        if (s.has_path_discrepancy) {
            std::cout << "max path discrepancy = " << kerr::format_double(s.max_path_discrepancy)
                      << '\n';
        }
        std::cout << "wrote " << parsed.config.output_dir.string() << '\n';
    } catch (const kerr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const kerr::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
