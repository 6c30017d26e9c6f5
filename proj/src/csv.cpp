#include "kmjack/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace kmjack {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) {
    // trim surrounding whitespace
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_number(const std::string& cell, const std::string& path, size_t line_no) {
  double v = 0.0;
  const auto* first = cell.data();
  const auto* last = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": not a number: '" +
                                cell + "'");
  }
  return v;
}

}  // namespace

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open dataset file: " + path);

  std::string line;
  size_t line_no = 0;
  if (!std::getline(in, line)) throw std::invalid_argument(path + ":1: empty file");
  ++line_no;
  const auto header = split_line(line);
  if (header.size() < 2 || header[header.size() - 2] != "time" || header.back() != "status")
    throw std::invalid_argument(path + ":1: header must end with time,status");
  const int p = static_cast<int>(header.size()) - 2;

  std::vector<Observation> obs;
  std::vector<double> covdata;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_line(line);
    if (cells.size() != header.size())
      throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": expected " +
                                  std::to_string(header.size()) + " fields, got " +
                                  std::to_string(cells.size()));
    for (int c = 0; c < p; ++c) covdata.push_back(parse_number(cells[c], path, line_no));
    Observation o;
    o.time = parse_number(cells[p], path, line_no);
    const double st = parse_number(cells[p + 1], path, line_no);
    if (st != 0.0 && st != 1.0)
      throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": status must be 0 or 1");
    o.status = static_cast<int>(st);
    obs.push_back(o);
  }

  Dataset d;
  d.observations = std::move(obs);
  if (p > 0) {
    const int n = static_cast<int>(d.observations.size());
    d.covariates = Matrix(n, p);
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < p; ++c) d.covariates(i, c) = covdata[static_cast<size_t>(i) * p + c];
  }
  return d;
}

std::pair<OrderedSample, Matrix> order_dataset(const Dataset& d) {
  const int n = static_cast<int>(d.observations.size());
  if (n < 2) throw std::invalid_argument("dataset needs at least 2 observations");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    const auto& a = d.observations[i];
    const auto& b = d.observations[j];
    if (a.time != b.time) return a.time < b.time;
    return a.status > b.status;
  });
  std::vector<double> times(n);
  std::vector<int> statuses(n);
  Matrix x(d.covariates.empty() ? 0 : n, d.covariates.cols());
  for (int i = 0; i < n; ++i) {
    times[i] = d.observations[order[i]].time;
    statuses[i] = d.observations[order[i]].status;
    for (int c = 0; c < d.covariates.cols(); ++c) x(i, c) = d.covariates(order[i], c);
  }
  return {OrderedSample::from_sorted(std::move(times), std::move(statuses)), std::move(x)};
}

std::string format_double(double v) {
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  CsvTable t;
  std::string line;
  if (std::getline(in, line)) t.header = split_line(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    t.rows.push_back(split_line(line));
  }
  return t;
}

}  // namespace kmjack
