#include "contagion/cli.hpp"

int main(int argc, char** argv) { return contagion::dispatch(argc, argv); }
