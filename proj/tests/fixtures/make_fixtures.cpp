#include <iostream>

#include "fixtures.hpp"
#include "mvr/error.hpp"

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make_fixtures <output-dir>\n";
        return 2;
    }
    try {
        mvr::testing::write_fixtures(argv[1]);
    } catch (const mvr::Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return 0;
}
