#include "sigtext/cli.hpp"

int main(int argc, char** argv)
{
    return sigtext::run_cli(argc, argv);
}
