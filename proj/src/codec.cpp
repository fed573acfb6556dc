// Canonical JSON and DIMACS formats for formulas.

#include <cctype>
#include <charconv>
#include <sstream>

#include <json.hpp>

#include "regsat/errors.hpp"
#include "regsat/model.hpp"

namespace regsat {

namespace {

constexpr const char* kFormulaSchema = "regsat-formula/1";

ModelParams params_or_format_error(std::int64_t n, std::int64_t d, std::int64_t k) {
  try {
    return ModelParams(n, d, k);
  } catch (const DomainError& e) {
    throw FormatError(std::string("invalid parameters: ") + e.what());
  }
}

}  // namespace

std::string to_json_text(const Formula& f) {
  const ModelParams& p = f.params();
  nlohmann::json slots = nlohmann::json::array();
  for (const Literal& lit : f.slots()) slots.push_back({lit.var + 1, lit.copy + 1, lit.sign});
  nlohmann::json doc = {
      {"format", kFormulaSchema},
      {"params", {{"n", p.n()}, {"d", p.d()}, {"k", p.k()}, {"m", p.m()}}},
      {"slots", std::move(slots)},
  };
  return doc.dump() + "\n";
}

Formula formula_from_json_text(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("formula JSON: ") + e.what());
  }
  try {
    if (doc.contains("format") && doc.at("format") != kFormulaSchema) {
      throw FormatError("formula JSON: unsupported format " + doc.at("format").dump());
    }
    const auto& jp = doc.at("params");
    const ModelParams params = params_or_format_error(
        jp.at("n").get<std::int64_t>(), jp.at("d").get<std::int64_t>(), jp.at("k").get<std::int64_t>());
    if (jp.contains("m") && jp.at("m").get<std::int64_t>() != params.m()) {
      throw FormatError("formula JSON: m does not equal 2dn/k");
    }
    std::vector<Literal> slots;
    for (const auto& row : doc.at("slots")) {
      if (!row.is_array() || row.size() != 3) throw FormatError("formula JSON: slot entries are [var, copy, sign]");
      slots.push_back(Literal{row[0].get<std::int32_t>() - 1, row[1].get<std::int32_t>() - 1,
                              row[2].get<std::int32_t>()});
    }
    return Formula(params, std::move(slots));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("formula JSON: ") + e.what());
  }
}

std::string to_dimacs(const Formula& f) {
  const ModelParams& p = f.params();
  std::ostringstream out;
  out << "c regular k-SAT n=" << p.n() << " d=" << p.d() << " k=" << p.k() << "\n";
  out << "p cnf " << p.n() << " " << p.m() << "\n";
  for (std::int64_t i = 0; i < p.m(); ++i) {
    for (const Literal& lit : f.clause(i)) out << lit.sign * (lit.var + 1) << " ";
    out << "0\n";
  }
  return out.str();
}

Formula formula_from_dimacs(std::string_view text, std::optional<std::int64_t> d) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::int64_t n = -1, m = -1;
  std::vector<std::vector<std::int64_t>> clauses;
  std::vector<std::int64_t> current;
  while (std::getline(in, line)) {
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == 'c' || line[start] == '%') continue;
    if (line[start] == 'p') {
      std::istringstream header(line.substr(start));
      std::string p, cnf;
      if (!(header >> p >> cnf >> n >> m) || cnf != "cnf" || n < 1 || m < 1) {
        throw FormatError("DIMACS: malformed header \"" + line + "\"");
      }
      continue;
    }
    if (n < 0) throw FormatError("DIMACS: clause before \"p cnf\" header");
    std::istringstream body(line);
    std::int64_t lit;
    while (body >> lit) {
      if (lit == 0) {
        clauses.push_back(std::move(current));
        current.clear();
      } else {
        if (lit > n || -lit > n) throw FormatError("DIMACS: literal " + std::to_string(lit) + " exceeds n");
        current.push_back(lit);
      }
    }
    if (!body.eof()) throw FormatError("DIMACS: non-integer token in \"" + line + "\"");
  }
  if (n < 0) throw FormatError("DIMACS: missing \"p cnf\" header");
  if (!current.empty()) throw FormatError("DIMACS: last clause is not 0-terminated");
  if (static_cast<std::int64_t>(clauses.size()) != m) {
    throw FormatError("DIMACS: header declares " + std::to_string(m) + " clauses, found " +
                      std::to_string(clauses.size()));
  }
  const std::int64_t k = static_cast<std::int64_t>(clauses.front().size());
  for (const auto& c : clauses) {
    if (static_cast<std::int64_t>(c.size()) != k) throw FormatError("DIMACS: clauses have unequal widths");
  }
  if (!d) {
    if ((m * k) % (2 * n) != 0) throw FormatError("DIMACS: literal count is not a multiple of 2n");
    d = m * k / (2 * n);
  }
  const ModelParams params = params_or_format_error(n, *d, k);
  if (params.m() != m) throw FormatError("DIMACS: clause count does not equal 2dn/k");

  std::vector<std::int64_t> pos(n, 0), neg(n, 0);
  for (const auto& c : clauses) {
    for (std::int64_t lit : c) (lit > 0 ? pos : neg)[std::abs(lit) - 1]++;
  }
  for (std::int64_t v = 0; v < n; ++v) {
    if (pos[v] != *d || neg[v] != *d) {
      throw FormatError("DIMACS: variable x" + std::to_string(v + 1) + " occurs " +
                        std::to_string(pos[v]) + " times positively and " + std::to_string(neg[v]) +
                        " times negatively, expected " + std::to_string(*d) + "/" + std::to_string(*d));
    }
  }

  std::vector<std::int32_t> next_pos(n, 0), next_neg(n, 0);
  std::vector<Literal> slots;
  slots.reserve(m * k);
  for (const auto& c : clauses) {
    for (std::int64_t lit : c) {
      const auto v = static_cast<std::int32_t>(std::abs(lit) - 1);
      auto& next = lit > 0 ? next_pos : next_neg;
      slots.push_back(Literal{v, next[v]++, lit > 0 ? 1 : -1});
    }
  }
  return Formula(params, std::move(slots));
}

Formula read_formula(std::string_view text) {
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '{' ? formula_from_json_text(text) : formula_from_dimacs(text);
  }
  throw FormatError("empty formula input");
}

}  // namespace regsat
