#include "gridhorizon/cli.h"

int main(int argc, char** argv) { return gridhorizon::cli::Main(argc, argv); }
