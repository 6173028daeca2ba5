#include "tvk/cli.hpp"

int main(int argc, char** argv) { return tvk::cli_main(argc, argv); }
