// cfnet command-line entry point; all logic lives in the library.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "cfnet/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    const cfnet::CliResult res = cfnet::run_cli(args);
    if (res.out_path.empty()) {
        std::cout << res.output;
    } else {
        std::ofstream file(res.out_path, std::ios::binary);
        if (!file) {
            std::cerr << "error: cannot open " << res.out_path << " for writing\n";
            return 2;
        }
        file << res.output;
    }
    return res.exit_code;
}
