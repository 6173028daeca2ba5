#pragma once

namespace tvk {

/// Command-line entry point. Exit codes: 0 success / verified, 1 negative
/// mathematical result (verification failed, no witness, retry budget
/// exhausted), 2 usage / IO / parse errors.
int cli_main(int argc, char** argv);

} // namespace tvk
