#pragma once

// Command-line front end: file loading, text and JSON reports, exit codes.
//
// Exit status: 1-100 identified quality factor, 101 no candidate,
// 102 candidate found but steps differ, 200 unreadable or unparsable input.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <algorithm>
#include <atomic>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "jpegqf/identify.hpp"
#include "jpegqf/jpeg.hpp"

namespace jpegqf {

struct CliRequest {
  std::string path;  // "-" reads standard input
  ChannelMask mask = ChannelMask::both();
  int verbosity = 1;
  bool json = false;
};

struct CliResult {
  int exit_status = 0;
  std::string output;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline std::vector<std::uint8_t> read_input(const std::string& path) {
  if (path == "-") {
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(std::cin)), std::istreambuf_iterator<char>());
    return data;
  }
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) throw IoError("file not found");
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open file");
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  if (is.bad()) throw IoError("read error");
  return data;
}

inline std::string to_string(const ScaleInterval& interval) {
  std::ostringstream os;
  os << '[';
  if (interval.lo) os << *interval.lo; else os << "-inf";
  os << ", ";
  if (interval.hi) os << *interval.hi; else os << "+inf";
  os << ')';
  if (interval.empty()) os << " (empty)";
  return os.str();
}

inline std::string to_string(const StepDiff& d) {
  std::ostringstream os;
  os << channel_name(d.channel) << " (" << d.row << ',' << d.col << "): observed " << d.observed << ", expected "
     << d.expected;
  return os.str();
}

// Level 0 is silent, level 1 one line, level 2 a multi-line summary.
inline std::string format_report(const IdentificationOutcome& outcome, int verbosity) {
  if (verbosity <= 0) return {};
  std::ostringstream os;
  if (const auto* e = std::get_if<Exact>(&outcome)) {
    if (verbosity == 1) {
      os << "quality factor " << e->quality.value() << " (standard IJG tables)\n";
    } else {
      os << "result: exact match\n"
         << "quality factor: " << e->quality.value() << '\n';
    }
  } else if (const auto* m = std::get_if<CandidateMismatch>(&outcome)) {
    if (verbosity == 1) {
      os << "non-standard tables: candidate quality factor " << m->quality.value() << " differs in " << m->diffs.size()
         << " step(s)\n";
    } else {
      os << "result: candidate mismatch\n"
         << "candidate quality factor: " << m->quality.value() << '\n'
         << "mismatching steps: " << m->diffs.size() << '\n';
      for (const StepDiff& d : m->diffs) os << "  " << to_string(d) << '\n';
    }
  } else {
    const auto& n = std::get<NoCandidate>(outcome);
    if (verbosity == 1) {
      os << "non-standard tables: no matching standard quality factor\n";
    } else {
      os << "result: no candidate\n"
         << "scale interval: " << to_string(n.interval) << '\n';
    }
  }
  return os.str();
}

inline std::string format_matrix(const QuantMatrix& m) {
  std::ostringstream os;
  for (int row = 1; row <= kBlockSize; ++row) {
    os << ' ';
    for (int col = 1; col <= kBlockSize; ++col) {
      const std::string v = std::to_string(m.at(row, col));
      os << std::string(v.size() < 4 ? 4 - v.size() : 1, ' ') << v;
    }
    os << '\n';
  }
  return os.str();
}

inline std::string format_verbose(const ExtractedTables& tables, const Identification& trace) {
  std::ostringstream os;
  for (const DqtTable& t : tables.definitions) {
    os << "table " << t.table_id;
    if (t.table_id == 0) os << " (luminance)";
    else if (t.table_id == 1) os << " (chrominance)";
    else os << " (not used)";
    os << ", " << (t.precision == Precision::EightBit ? "8-bit" : "16-bit") << ":\n" << format_matrix(t.matrix);
  }
  os << "scale interval: " << to_string(trace.interval) << '\n';
  os << "candidates:";
  if (trace.candidates.empty()) os << " none";
  for (QualityFactor f : trace.candidates) os << ' ' << f.value();
  os << '\n';
  for (const CandidateCheck& c : trace.checks)
    os << "check quality " << c.quality.value() << ": "
       << (c.mismatches == 0 ? std::string("all steps match") : std::to_string(c.mismatches) + " step(s) differ") << '\n';
  os << format_report(trace.outcome, 2);
  return os.str();
}

inline nlohmann::json interval_json(const ScaleInterval& interval) {
  auto bound = [](const std::optional<Rational>& b) -> nlohmann::json {
    if (!b) return nullptr;
    std::ostringstream os;
    os << *b;
    return os.str();
  };
  return {{"lo", bound(interval.lo)}, {"hi", bound(interval.hi)}, {"empty", interval.empty()}};
}

inline nlohmann::json report_json(const std::string& path, const Identification& trace) {
  nlohmann::json j;
  j["path"] = path;
  j["exit"] = exit_code(trace.outcome);
  j["interval"] = interval_json(trace.interval);
  j["candidates"] = nlohmann::json::array();
  for (QualityFactor f : trace.candidates) j["candidates"].push_back(f.value());
  j["diffs"] = nlohmann::json::array();
  if (const auto* e = std::get_if<Exact>(&trace.outcome)) {
    j["outcome"] = "exact";
    j["quality"] = e->quality.value();
  } else if (const auto* m = std::get_if<CandidateMismatch>(&trace.outcome)) {
    j["outcome"] = "candidate_mismatch";
    j["quality"] = m->quality.value();
    for (const StepDiff& d : m->diffs)
      j["diffs"].push_back({{"channel", channel_name(d.channel)}, {"row", d.row}, {"col", d.col},
                            {"observed", d.observed}, {"expected", d.expected}});
  } else {
    j["outcome"] = "no_candidate";
    j["quality"] = nullptr;
  }
  return j;
}

inline CliResult error_result(const CliRequest& req, const std::string& message) {
  if (req.json) {
    nlohmann::json j = {{"path", req.path}, {"exit", kExitIoError}, {"outcome", "error"}, {"error", message}};
    return {kExitIoError, j.dump() + '\n'};
  }
  if (req.verbosity <= 0) return {kExitIoError, {}};
  return {kExitIoError, req.path + ": error: " + message + '\n'};
}

// Identifies already-loaded bytes; `req.path` is used only as a label.
inline CliResult run_bytes(const CliRequest& req, std::span<const std::uint8_t> data) {
  ExtractedTables tables;
  std::optional<Identification> traced;
  try {
    tables = read_quant_tables(data);
    traced = identify_detailed(tables.pair, req.mask);
  } catch (const JpegError& e) {
    return error_result(req, e.what());
  } catch (const std::invalid_argument& e) {
    return error_result(req, e.what());
  }
  const Identification& trace = *traced;
  const int status = exit_code(trace.outcome);
  if (req.json) return {status, report_json(req.path, trace).dump() + '\n'};
  if (req.verbosity <= 0) return {status, {}};
  if (req.verbosity == 1) return {status, req.path + ": " + format_report(trace.outcome, 1)};
  return {status, "file: " + req.path + '\n' + format_verbose(tables, trace)};
}

inline CliResult run(const CliRequest& req) {
  std::vector<std::uint8_t> data;
  try {
    data = read_input(req.path);
  } catch (const IoError& e) {
    return error_result(req, e.what());
  }
  return run_bytes(req, data);
}

struct BatchResult {
  int exit_status;
  std::vector<CliResult> results;  // in request order
};

// Files are processed concurrently. The exit status is that of the first
// file (in request order) that failed, otherwise that of the first file.
inline BatchResult run_batch(const std::vector<CliRequest>& requests, unsigned workers = 0) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, requests.size())));

  BatchResult out{0, std::vector<CliResult>(requests.size())};
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < requests.size(); i = next++) out.results[i] = run(requests[i]);
      });
  }
  for (const CliResult& r : out.results) {
    if (r.exit_status > kMaxQuality) {
      out.exit_status = r.exit_status;
      return out;
    }
  }
  if (!out.results.empty()) out.exit_status = out.results.front().exit_status;
  return out;
}

}  // namespace jpegqf
