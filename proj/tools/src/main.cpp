#include <iostream>
#include <string>
#include <vector>

#include "schw_cli/cli.hpp"

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);
    return schw::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
