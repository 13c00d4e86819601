#include "ptindep/pointproc.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ptindep/error.hpp"

namespace ptindep {

PointProcess make_point_process(std::vector<double> times, double window_end) {
  if (!(window_end > 0) || !std::isfinite(window_end))
    throw Error(ErrorKind::InvalidArgument, "window_end must be a positive finite number");
  for (double t : times) {
    if (!(t >= 0 && t <= window_end))
      throw Error(ErrorKind::OutOfWindow,
                  "time " + format_real(t) + " outside [0, " + format_real(window_end) + "]");
  }
  std::sort(times.begin(), times.end());
  if (std::adjacent_find(times.begin(), times.end()) != times.end())
    throw Error(ErrorKind::DuplicateTime, "two events share the same time");
  PointProcess p;
  p.times_ = std::move(times);
  p.window_end_ = window_end;
  return p;
}

PointProcess make_sorted_unchecked(std::vector<double> times, double window_end) {
  PointProcess p;
  p.times_ = std::move(times);
  p.window_end_ = window_end;
  return p;
}

BivariatePair make_pair(PointProcess first, PointProcess second) {
  if (first.window_end() != second.window_end())
    throw Error(ErrorKind::InvalidArgument, "pair components have different windows");
  return {std::move(first), std::move(second)};
}

BivariateSample::BivariateSample(std::vector<BivariatePair> pairs) : pairs_(std::move(pairs)) {
  if (pairs_.size() < 2)
    throw Error(ErrorKind::DegenerateSample, "a sample needs at least two trials");
  const double w = pairs_.front().first.window_end();
  for (const auto& p : pairs_) {
    if (p.first.window_end() != w || p.second.window_end() != w)
      throw Error(ErrorKind::InvalidArgument, "all trials must share one window");
  }
}

std::string format_real(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

namespace {

double parse_real(std::string_view token) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw Error(ErrorKind::ParseError, "not a number: '" + std::string(token) + "'");
  return v;
}

void write_process(std::ostream& out, const PointProcess& p) {
  bool first = true;
  for (double t : p.times()) {
    if (!first) out << ' ';
    out << format_real(t);
    first = false;
  }
  out << '\n';
}

PointProcess parse_process(const std::string& line, double window_end) {
  std::vector<double> times;
  if (!line.empty()) {
    std::string_view rest(line);
    while (true) {
      const std::size_t next = rest.find(' ');
      const std::string_view token = rest.substr(0, next);
      if (token.empty())
        throw Error(ErrorKind::ParseError, "times must be separated by single spaces");
      times.push_back(parse_real(token));
      if (next == std::string_view::npos) break;
      rest.remove_prefix(next + 1);
    }
  }
  return make_point_process(std::move(times), window_end);
}

}  // namespace

void write_sample(std::ostream& out, const BivariateSample& sample) {
  out << "# window_end=" << format_real(sample.window_end()) << '\n';
  for (const auto& pair : sample) {
    write_process(out, pair.first);
    write_process(out, pair.second);
  }
}

BivariateSample read_sample(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::ParseError, "missing header line");
  constexpr std::string_view prefix = "# window_end=";
  if (line.rfind(prefix, 0) != 0)
    throw Error(ErrorKind::ParseError, "header must read '# window_end=<T>'");
  const double window_end = parse_real(std::string_view(line).substr(prefix.size()));

  std::vector<PointProcess> processes;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    processes.push_back(parse_process(line, window_end));
  }
  if (processes.size() % 2 != 0)
    throw Error(ErrorKind::ParseError, "odd number of process lines");
  std::vector<BivariatePair> pairs;
  pairs.reserve(processes.size() / 2);
  for (std::size_t i = 0; i < processes.size(); i += 2)
    pairs.push_back({std::move(processes[i]), std::move(processes[i + 1])});
  return BivariateSample(std::move(pairs));
}

void save_sample(const std::string& path, const BivariateSample& sample) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot open '" + path + "' for writing");
  write_sample(out, sample);
}

BivariateSample load_sample(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open '" + path + "'");
  return read_sample(in);
}

}  // namespace ptindep
