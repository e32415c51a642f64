#include "splv/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace splv {

namespace {

// Reports carry microsecond timings so both renderings show the same number.
double micros(double s) { return std::round(s * 1e6) / 1e6; }

std::string seconds_text(double s) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", s);
  return buf;
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

std::string join(const std::vector<std::string>& xs, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
  return out;
}

Report::ModeRow mode_row(const ModeResult& m, const Spl& spl) {
  Report::ModeRow row;
  row.name = mode_name(m.mode);
  row.verdict = m.conforms ? "conforms" : "non-conforming";
  if (m.witness) row.witness = format_witness(*m.witness, spl);
  row.seconds = micros(m.seconds);
  row.refinements = m.stats.refinements;
  row.sat_calls = m.stats.sat_calls;
  row.clauses = m.stats.clauses;
  row.variables = m.stats.variables;
  row.components = m.stats.components;
  return row;
}

}  // namespace

Report make_report(const FeatureResult& r) {
  Report out;
  out.name = r.name;
  Report::FeatureRow row;
  row.name = r.name;
  row.design_variants = r.design_configs;
  row.requirement_configs = r.requirement_configs;
  row.mapping_pairs = r.mapping_pairs;
  for (const auto& c : r.failing) row.failing.push_back(c.to_string());
  row.seconds = micros(r.seconds);
  out.features.push_back(std::move(row));
  return out;
}

Report make_report(const SplResult& r, const Spl& spl) {
  Report out;
  out.name = r.name;
  for (const auto& f : r.features) out.features.push_back(make_report(f).features.front());
  out.has_spl = true;
  out.spl_checked = r.spl_checked;
  out.verdict = r.conforms ? "conforms" : "non-conforming";
  if (r.witness) out.witness = format_witness(*r.witness, spl);
  out.disagreement = r.disagreement;
  out.masked = r.masked;
  for (const auto& m : r.modes) out.modes.push_back(mode_row(m, spl));
  return out;
}

std::string render_kv(const Report& r) {
  std::ostringstream out;
  out << "format=splv-report-1\n";
  out << "name=" << r.name << "\n";
  for (std::size_t i = 0; i < r.features.size(); ++i) {
    const auto& f = r.features[i];
    std::string k = "feature." + std::to_string(i) + ".";
    out << k << "name=" << f.name << "\n";
    out << k << "design_variants=" << f.design_variants << "\n";
    out << k << "requirement_configs=" << f.requirement_configs << "\n";
    out << k << "mapping_pairs=" << f.mapping_pairs << "\n";
    out << k << "failing=" << join(f.failing, ";") << "\n";
    out << k << "seconds=" << seconds_text(f.seconds) << "\n";
  }
  out << "spl=" << yes_no(r.has_spl) << "\n";
  if (!r.has_spl) return out.str();
  out << "spl.checked=" << yes_no(r.spl_checked) << "\n";
  out << "spl.verdict=" << r.verdict << "\n";
  out << "spl.witness=" << r.witness << "\n";
  out << "spl.disagreement=" << yes_no(r.disagreement) << "\n";
  out << "spl.masked=" << yes_no(r.masked) << "\n";
  for (std::size_t j = 0; j < r.modes.size(); ++j) {
    const auto& m = r.modes[j];
    std::string k = "mode." + std::to_string(j) + ".";
    out << k << "name=" << m.name << "\n";
    out << k << "verdict=" << m.verdict << "\n";
    out << k << "witness=" << m.witness << "\n";
    out << k << "seconds=" << seconds_text(m.seconds) << "\n";
    out << k << "refinements=" << m.refinements << "\n";
    out << k << "sat_calls=" << m.sat_calls << "\n";
    out << k << "clauses=" << m.clauses << "\n";
    out << k << "variables=" << m.variables << "\n";
    out << k << "components=" << m.components << "\n";
  }
  return out.str();
}

std::string render_table(const Report& r) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"feature", "design variants", "req configs", "phi pairs", "failing", "time (s)"});
  for (const auto& f : r.features)
    rows.push_back({f.name, std::to_string(f.design_variants), std::to_string(f.requirement_configs),
                    std::to_string(f.mapping_pairs), f.failing.empty() ? "-" : join(f.failing, " "),
                    seconds_text(f.seconds)});
  std::vector<std::size_t> width(rows.front().size(), 0);
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());

  std::ostringstream out;
  out << "report " << r.name << "\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < rows[i].size(); ++c) {
      // names and failing lists left-aligned, numbers right-aligned
      bool left = c == 0 || c == 4;
      std::string pad(width[c] - rows[i][c].size(), ' ');
      out << (c ? "  " : "") << (left ? rows[i][c] + pad : pad + rows[i][c]);
    }
    out << "\n";
    if (i == 0) {
      std::size_t total = 0;
      for (std::size_t w : width) total += w + 2;
      out << std::string(total - 2, '-') << "\n";
    }
  }
  if (!r.has_spl) return out.str();
  out << "SPL " << r.name << ": " << r.verdict;
  if (!r.spl_checked) out << " (feature check failed; SPL step skipped)";
  if (!r.witness.empty()) out << ", witness " << r.witness;
  if (r.disagreement) out << ", MODES DISAGREE";
  if (r.masked) out << " (the composite conforms: a shared event hides the difference)";
  out << "\n";
  for (const auto& m : r.modes) {
    out << "  mode " << m.name << ": " << m.verdict;
    if (!m.witness.empty()) out << " witness=" << m.witness;
    out << " time=" << seconds_text(m.seconds) << " refinements=" << m.refinements << " sat_calls=" << m.sat_calls
        << " clauses=" << m.clauses << " variables=" << m.variables << " components=" << m.components << "\n";
  }
  return out.str();
}

Report parse_kv(std::string_view input, const std::string& source) {
  Report r;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) { throw ParseError(source, line_no, 1, msg); };
  auto to_u64 = [&](const std::string& v) {
    std::uint64_t x = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size()) fail("expected a count, found '" + v + "'");
    return x;
  };
  auto to_double = [&](const std::string& v) {
    char* end = nullptr;
    double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size()) fail("expected a number, found '" + v + "'");
    return x;
  };
  auto to_bool = [&](const std::string& v) {
    if (v == "yes") return true;
    if (v == "no") return false;
    fail("expected yes or no, found '" + v + "'");
    return false;
  };
  auto split = [](const std::string& v, char sep) {
    std::vector<std::string> out;
    if (v.empty()) return out;
    std::size_t start = 0;
    for (;;) {
      std::size_t at = v.find(sep, start);
      out.push_back(v.substr(start, at - start));
      if (at == std::string::npos) return out;
      start = at + 1;
    }
  };
  // `feature.3.name` -> (3, "name"); rows must appear in order
  auto indexed = [&](const std::string& key, const std::string& prefix, std::size_t count) {
    std::size_t dot = key.find('.', prefix.size());
    if (dot == std::string::npos) fail("malformed key '" + key + "'");
    std::size_t i = to_u64(key.substr(prefix.size(), dot - prefix.size()));
    if (i > count) fail("row index " + std::to_string(i) + " out of order");
    return std::make_pair(i, key.substr(dot + 1));
  };

  bool saw_format = false;
  std::size_t pos = 0;
  while (pos < input.size()) {
    std::size_t end = input.find('\n', pos);
    if (end == std::string_view::npos) end = input.size();
    std::string line(input.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail("expected key=value");
    std::string key = line.substr(0, eq), value = line.substr(eq + 1);

    if (key == "format") {
      if (value != "splv-report-1") fail("unsupported report format '" + value + "'");
      saw_format = true;
    } else if (key == "name") {
      r.name = value;
    } else if (key.rfind("feature.", 0) == 0) {
      auto [i, field] = indexed(key, "feature.", r.features.size());
      if (i == r.features.size()) r.features.emplace_back();
      auto& f = r.features[i];
      if (field == "name") f.name = value;
      else if (field == "design_variants") f.design_variants = to_u64(value);
      else if (field == "requirement_configs") f.requirement_configs = to_u64(value);
      else if (field == "mapping_pairs") f.mapping_pairs = to_u64(value);
      else if (field == "failing") f.failing = split(value, ';');
      else if (field == "seconds") f.seconds = to_double(value);
      else fail("unknown key '" + key + "'");
    } else if (key == "spl") {
      r.has_spl = to_bool(value);
    } else if (key == "spl.checked") {
      r.spl_checked = to_bool(value);
    } else if (key == "spl.verdict") {
      r.verdict = value;
    } else if (key == "spl.witness") {
      r.witness = value;
    } else if (key == "spl.disagreement") {
      r.disagreement = to_bool(value);
    } else if (key == "spl.masked") {
      r.masked = to_bool(value);
    } else if (key.rfind("mode.", 0) == 0) {
      auto [j, field] = indexed(key, "mode.", r.modes.size());
      if (j == r.modes.size()) r.modes.emplace_back();
      auto& m = r.modes[j];
      if (field == "name") m.name = value;
      else if (field == "verdict") m.verdict = value;
      else if (field == "witness") m.witness = value;
      else if (field == "seconds") m.seconds = to_double(value);
      else if (field == "refinements") m.refinements = to_u64(value);
      else if (field == "sat_calls") m.sat_calls = to_u64(value);
      else if (field == "clauses") m.clauses = to_u64(value);
      else if (field == "variables") m.variables = to_u64(value);
      else if (field == "components") m.components = to_u64(value);
      else fail("unknown key '" + key + "'");
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  if (!saw_format) throw ParseError(source, 1, 1, "missing format line");
  return r;
}

}  // namespace splv
