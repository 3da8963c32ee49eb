#include "sincfrac/cli.hpp"

int main(int argc, char** argv)
{
    return sincfrac::cli::run(argc, argv);
}
