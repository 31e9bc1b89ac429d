// Command-line front end for the EIT / ATS information-criterion test.

#include <iostream>

#include "eitats/app.hpp"

int main(int argc, char** argv)
{
    eitats::app::Parsed parsed;
    try {
        parsed = eitats::app::parse_command_line(argc, argv);
    } catch (const std::exception& e) {
        std::cout << nlohmann::json{{"status", "error"},
                                    {"error", {{"kind", "usage"}, {"message", e.what()}}}}
                         .dump(2)
                  << "\n";
        return 2;
    }
    if (!parsed.config) {
        if (parsed.exit_code == 0) {
            std::cout << parsed.message;
            return 0;
        }
        std::cerr << parsed.message;
        return 2;
    }

    const auto outcome = eitats::app::run(*parsed.config);
    std::cout << outcome.report.dump(2) << "\n";
    return outcome.exit_code;
}
