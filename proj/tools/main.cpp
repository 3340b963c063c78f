#include "cli_app.hpp"

int main(int argc, char** argv) {
    return spiky::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
