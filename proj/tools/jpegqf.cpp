// jpegqf: report the IJG quality factor of a JPEG file through the exit status.
//
//   jpegqf PATH [CHANNEL] [VERBOSITY] [--json]
//   jpegqf --batch [-c CHANNEL] [-v VERBOSITY] [--json] PATH...

#include <charconv>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "jpegqf/cli.hpp"

namespace {

std::optional<int> parse_int(const std::string& s) {
  int v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) return std::nullopt;
  return v;
}

int usage_error(const CLI::App& app, const std::string& message) {
  std::cerr << "usage error: " << message << "\n" << app.help();
  return jpegqf::kExitIoError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Identify the standard IJG quality factor of JPEG files from their quantization tables.\n"
               "Exit status: 1-100 quality factor, 101 no candidate, 102 candidate mismatch, 200 I/O or usage error."};
  std::vector<std::string> args;
  bool batch = false;
  bool json = false;
  int channel = 3;
  int verbosity = 1;
  app.add_option("args", args, "PATH [CHANNEL] [VERBOSITY]; CHANNEL 1=luminance 2=chrominance 3=both; "
                               "VERBOSITY 0=silent 1=one line 2=verbose. PATH '-' reads standard input.")
      ->required();
  app.add_flag("--batch", batch, "treat every positional argument as a path");
  app.add_option("-c,--channel", channel, "channel mask in batch mode")->check(CLI::Range(1, 3));
  app.add_option("-v,--verbosity", verbosity, "verbosity in batch mode")->check(CLI::Range(0, 2));
  app.add_flag("--json", json, "print one JSON object per file instead of text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return usage_error(app, e.what());
  }

  std::vector<jpegqf::CliRequest> requests;
  if (batch) {
    for (const std::string& path : args)
      requests.push_back({path, jpegqf::ChannelMask::from_bits(channel), verbosity, json});
  } else {
    if (args.size() > 3) return usage_error(app, "expected PATH [CHANNEL] [VERBOSITY]");
    if (args.size() >= 2) {
      const auto c = parse_int(args[1]);
      if (!c || *c < 1 || *c > 3) return usage_error(app, "CHANNEL must be 1, 2 or 3");
      channel = *c;
    }
    if (args.size() == 3) {
      const auto v = parse_int(args[2]);
      if (!v || *v < 0 || *v > 2) return usage_error(app, "VERBOSITY must be 0, 1 or 2");
      verbosity = *v;
    }
    requests.push_back({args[0], jpegqf::ChannelMask::from_bits(channel), verbosity, json});
  }

  const jpegqf::BatchResult result = jpegqf::run_batch(requests);
  for (const jpegqf::CliResult& r : result.results) std::cout << r.output;
  std::cout.flush();
  return result.exit_status;
}
