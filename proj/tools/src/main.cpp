#include "fvcs_tools/app.hpp"

int main(int argc, char** argv) { return fvcs::app::run(argc, argv); }
