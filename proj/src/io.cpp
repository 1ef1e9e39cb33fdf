#include "eamkit/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "eamkit/errors.hpp"

namespace eamkit {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_sig12(double x) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.12g", x);
  return buffer;
}

double round_sig12(double x) { return std::strtod(format_sig12(x).c_str(), nullptr); }

std::string timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string temp = path + ".tmp";
  try {
    {
      std::ofstream out(temp, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("cannot open " + temp + " for writing");
      out.write(content.data(), static_cast<std::streamsize>(content.size()));
      if (!out) throw IoError("short write to " + temp);
    }
    fs::rename(temp, path);
  } catch (const fs::filesystem_error& e) {
    std::error_code ec;
    fs::remove(temp, ec);
    throw IoError(std::string("atomic_write: ") + e.what());
  } catch (...) {
    std::error_code ec;
    fs::remove(temp, ec);
    throw;
  }
}

void write_entropy_table_csv(const EntropyTable& table, const std::string& path,
                             bool timestamp) {
  validate_complete(table);
  std::string out;
  out += "# n_sites=" + std::to_string(table.n_sites) + "\n";
  out += "# engine=" + table.engine + "\n";
  out += "# model=" + table.model + "\n";
  if (timestamp) out += "# generated=" + timestamp_utc() + "\n";
  out += "mask_decimal,popcount,entropy_nats\n";
  for (std::size_t m = 0; m < table.entropies.size(); ++m) {
    out += std::to_string(m);
    out += ',';
    out += std::to_string(popcount(static_cast<Mask>(m)));
    out += ',';
    out += format_sig12(table.entropies[m]);
    out += '\n';
  }
  atomic_write(path, out);
}

void write_entropy_table_json(const EntropyTable& table, const std::string& path) {
  validate_complete(table);
  json rows = json::array();
  for (std::size_t m = 0; m < table.entropies.size(); ++m)
    rows.push_back({m, popcount(static_cast<Mask>(m)), round_sig12(table.entropies[m])});
  const json doc = {{"n_sites", table.n_sites},
                    {"engine", table.engine},
                    {"model", table.model},
                    {"rows", std::move(rows)}};
  atomic_write(path, doc.dump(2) + "\n");
}

namespace {

EntropyTable parse_table_csv(const std::string& text) {
  EntropyTable table;
  std::istringstream in(text);
  std::string line;
  std::vector<std::pair<Mask, double>> rows;
  int header_n = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(' '));
      key.erase(key.find_last_not_of(' ') + 1);
      const std::string value = line.substr(eq + 1);
      if (key == "n_sites") header_n = std::atoi(value.c_str());
      else if (key == "engine") table.engine = value;
      else if (key == "model") table.model = value;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(line[0]))) continue;  // column header
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
    if (c2 == std::string::npos)
      throw IoError("entropy table: malformed row '" + line + "'");
    const Mask mask = std::strtoull(line.c_str(), nullptr, 10);
    const double entropy = std::strtod(line.c_str() + c2 + 1, nullptr);
    rows.emplace_back(mask, entropy);
  }
  if (rows.empty()) throw IoError("entropy table: no data rows");

  int n = header_n;
  if (n == 0) {
    while ((std::size_t{1} << n) < rows.size()) ++n;
  }
  if (rows.size() != (std::size_t{1} << n))
    throw IoError("entropy table: expected " + std::to_string(std::size_t{1} << n) +
                  " rows, found " + std::to_string(rows.size()));
  table.n_sites = n;
  table.entropies.assign(std::size_t{1} << n, 0.0);
  for (std::size_t m = 0; m < rows.size(); ++m) {
    if (rows[m].first != m)
      throw IoError("entropy table: masks not ascending and complete at row " +
                    std::to_string(m));
    table.entropies[m] = rows[m].second;
  }
  return table;
}

EntropyTable parse_table_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw IoError(std::string("entropy table: ") + e.what());
  }
  EntropyTable table;
  try {
    table.n_sites = doc.at("n_sites").get<int>();
    table.engine = doc.value("engine", "");
    table.model = doc.value("model", "");
    const auto& rows = doc.at("rows");
    table.entropies.assign(std::size_t{1} << table.n_sites, 0.0);
    if (rows.size() != table.entropies.size())
      throw IoError("entropy table: wrong row count");
    for (std::size_t m = 0; m < rows.size(); ++m) {
      if (rows[m].at(0).get<std::size_t>() != m)
        throw IoError("entropy table: masks not ascending and complete");
      table.entropies[m] = rows[m].at(2).get<double>();
    }
  } catch (const json::exception& e) {
    throw IoError(std::string("entropy table: ") + e.what());
  }
  return table;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

EntropyTable read_entropy_table(const std::string& path) {
  const std::string text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw IoError("entropy table: empty file " + path);
  EntropyTable table =
      text[first] == '{' ? parse_table_json(text) : parse_table_csv(text);
  validate_complete(table);
  return table;
}

void write_eam_json(const EntanglementAdjacency& eam, const std::string& path) {
  json links = json::array();
  for (int i = 0; i < eam.n_sites; ++i)
    for (int j = i + 1; j < eam.n_sites; ++j)
      links.push_back({i, j, round_sig12(eam.j(i, j))});
  json doc = {{"n_sites", eam.n_sites}, {"links", std::move(links)}};
  if (eam.s0)
    doc["s0"] = round_sig12(*eam.s0);
  else
    doc["s0"] = nullptr;
  atomic_write(path, doc.dump(2) + "\n");
}

EntanglementAdjacency read_eam_json(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw IoError(std::string("eam file: ") + e.what());
  }
  EntanglementAdjacency eam;
  try {
    eam.n_sites = doc.at("n_sites").get<int>();
    eam.j = Eigen::MatrixXd::Zero(eam.n_sites, eam.n_sites);
    const auto& links = doc.at("links");
    if (static_cast<int>(links.size()) != pair_count(eam.n_sites))
      throw IoError("eam file: expected all N(N-1)/2 links");
    for (const auto& link : links) {
      const int i = link.at(0).get<int>();
      const int j = link.at(1).get<int>();
      if (i < 0 || j <= i || j >= eam.n_sites)
        throw IoError("eam file: bad link endpoints");
      eam.j(i, j) = eam.j(j, i) = link.at(2).get<double>();
    }
    if (!doc.at("s0").is_null()) eam.s0 = doc.at("s0").get<double>();
  } catch (const json::exception& e) {
    throw IoError(std::string("eam file: ") + e.what());
  }
  return eam;
}

void write_eam_csv(const EntanglementAdjacency& eam, const std::string& path,
                   bool timestamp) {
  std::string out;
  out += "# n_sites=" + std::to_string(eam.n_sites) + "\n";
  out += "# s0=" + (eam.s0 ? format_sig12(*eam.s0) : std::string("none")) + "\n";
  if (timestamp) out += "# generated=" + timestamp_utc() + "\n";
  for (int i = 0; i < eam.n_sites; ++i) {
    for (int j = 0; j < eam.n_sites; ++j) {
      if (j) out += ',';
      out += format_sig12(eam.j(i, j));
    }
    out += '\n';
  }
  atomic_write(path, out);
}

void write_fit_report_json(const FitReport& report, const std::string& path) {
  const json doc = {
      {"error", round_sig12(report.error)},
      {"max_residual", round_sig12(report.max_residual)},
      {"n_equations", report.n_equations},
      {"method", report.method == FitMethod::closed_form ? "closed_form"
                                                         : "generic_least_squares"},
      {"offset_enabled", report.offset_enabled},
      {"rank_deficient", report.rank_deficient}};
  atomic_write(path, doc.dump(2) + "\n");
}

void write_contour_csv(const ContourVector& contour, const std::string& route,
                       const std::string& model, int n_sites,
                       const std::string& path, bool timestamp) {
  std::string out;
  out += "# route=" + route + "\n";
  out += "# mask=" + std::to_string(contour.mask) + "\n";
  out += "# model=" + model + "\n";
  out += "# n_sites=" + std::to_string(n_sites) + "\n";
  if (timestamp) out += "# generated=" + timestamp_utc() + "\n";
  out += "site,value_nats\n";
  for (std::size_t k = 0; k < contour.sites.size(); ++k) {
    out += std::to_string(contour.sites[k]);
    out += ',';
    out += format_sig12(contour.values[k]);
    out += '\n';
  }
  atomic_write(path, out);
}

void write_comparison_json(const ContourComparison& cmp, Mask mask,
                           const std::string& route_a, const std::string& route_b,
                           const std::string& path) {
  const json doc = {{"mask", mask},
                    {"route_a", route_a},
                    {"route_b", route_b},
                    {"l1", round_sig12(cmp.l1)},
                    {"normalized_l1", round_sig12(cmp.normalized_l1)},
                    {"pearson", round_sig12(cmp.pearson)},
                    {"sum_a", round_sig12(cmp.sum_a)},
                    {"sum_b", round_sig12(cmp.sum_b)}};
  atomic_write(path, doc.dump(2) + "\n");
}

void write_state_csv(const PureState& state, const std::string& model,
                     const std::string& path, bool timestamp) {
  state.validate();
  std::string out;
  out += "# n_sites=" + std::to_string(state.n_sites) + "\n";
  out += "# model=" + model + "\n";
  if (timestamp) out += "# generated=" + timestamp_utc() + "\n";
  out += "index,re,im\n";
  for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += format_sig12(state.amplitudes[i].real());
    out += ',';
    out += format_sig12(state.amplitudes[i].imag());
    out += '\n';
  }
  atomic_write(path, out);
}

}  // namespace eamkit
