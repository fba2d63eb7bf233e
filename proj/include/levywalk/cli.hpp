#pragma once

namespace levywalk {

// Entry point of the levywalk tool, callable in-process. Returns the process
// exit code: 0 success, 2 usage or domain error, 3 numerical failure.
int cli_main(int argc, const char* const* argv);

}  // namespace levywalk
