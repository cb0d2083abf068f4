#pragma once

namespace yde {

// Batch front-end.  Logs go to stderr, data to files and stdout; exit code 0
// on success, 1 with a structured JSON error line on stderr otherwise.
int run_cli(int argc, char** argv);

}  // namespace yde
