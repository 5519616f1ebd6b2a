#include "nswiener/operator_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "nswiener/errors.hpp"

namespace nswiener {

namespace {

using nlohmann::json;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

[[noreturn]] void bad_key(const std::string& key, const std::string& why) {
  throw ParseError("key '" + key + "' " + why);
}

std::int64_t require_integer(const json& v, const std::string& key) {
  if (!v.is_number_integer()) bad_key(key, "must be an integer");
  return v.get<std::int64_t>();
}

IndexWindow require_window(const json& v, const std::string& key) {
  if (!v.is_array() || v.size() != 2) bad_key(key, "must be a [lo, hi] pair");
  const std::int64_t lo = require_integer(v[0], key);
  const std::int64_t hi = require_integer(v[1], key);
  if (lo > hi) bad_key(key, "must satisfy lo <= hi");
  return IndexWindow(lo, hi);
}

double require_finite_number(const json& v, const std::string& key) {
  if (!v.is_number()) bad_key(key, "must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) bad_key(key, "must be finite");
  return x;
}

CMatrix require_block(const json& v, int m, const std::string& key) {
  if (!v.is_array() || static_cast<int>(v.size()) != m) {
    bad_key(key, "must be a " + std::to_string(m) + "-row block");
  }
  CMatrix b(m, m);
  for (int r = 0; r < m; ++r) {
    const json& row = v[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != m) {
      bad_key(key, "row " + std::to_string(r) + " must have " + std::to_string(m) + " entries");
    }
    for (int c = 0; c < m; ++c) {
      const json& e = row[static_cast<std::size_t>(c)];
      if (!e.is_array() || e.size() != 2) bad_key(key, "entries must be [re, im] pairs");
      b(r, c) = Complex(require_finite_number(e[0], key), require_finite_number(e[1], key));
    }
  }
  return b;
}

std::int64_t parse_offset(const std::string& s) {
  if (s.empty()) throw ParseError("key 'diagonals' has an empty offset key");
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (errno != 0 || end != s.c_str() + s.size()) {
    throw ParseError("key 'diagonals." + s + "' is not an integer offset");
  }
  return v;
}

json parse_rejecting_duplicates(const std::string& text) {
  std::vector<std::set<std::string>> seen;
  auto cb = [&seen](int, json::parse_event_t event, json& parsed) {
    if (event == json::parse_event_t::object_start) {
      seen.emplace_back();
    } else if (event == json::parse_event_t::object_end) {
      seen.pop_back();
    } else if (event == json::parse_event_t::key) {
      const auto key = parsed.get<std::string>();
      if (!seen.back().insert(key).second) throw ParseError("duplicate key '" + key + "'");
    }
    return true;
  };
  try {
    return json::parse(text, cb);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

NSOperator parse_operator_json(const std::string& text) {
  const json j = parse_rejecting_duplicates(text);
  if (!j.is_object()) throw ParseError("top level must be an object");
  for (const auto& item : j.items()) {
    const std::string& k = item.key();
    if (k != "block_size" && k != "window" && k != "diagonals" && k != "exact_interior") {
      bad_key(k, "is not part of the operator schema");
    }
  }
  if (!j.contains("block_size")) throw ParseError("key 'block_size' is missing");
  if (!j.contains("window")) throw ParseError("key 'window' is missing");
  if (!j.contains("diagonals")) throw ParseError("key 'diagonals' is missing");

  const std::int64_t bs64 = require_integer(j["block_size"], "block_size");
  if (bs64 < 1 || bs64 > 64) bad_key("block_size", "must be in 1..64");
  const int m = static_cast<int>(bs64);
  const IndexWindow window = require_window(j["window"], "window");

  NSOperator out = NSOperator::zero(m, window);

  const json& diags = j["diagonals"];
  if (!diags.is_object()) bad_key("diagonals", "must be an object keyed by offset");
  for (const auto& item : diags.items()) {
    const std::string key = "diagonals." + item.key();
    const std::int64_t offset = parse_offset(item.key());
    const json& arr = item.value();
    if (!arr.is_array() || static_cast<std::int64_t>(arr.size()) != window.length()) {
      bad_key(key, "must be an array of exactly " + std::to_string(window.length()) + " blocks");
    }
    std::vector<CMatrix> blocks;
    blocks.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
      blocks.push_back(
          require_block(arr[i], m, key + "[" + std::to_string(static_cast<long long>(i)) + "]"));
    }
    // Trim leading/trailing zero blocks so in-memory windows reflect actual
    // support (files always carry full-window arrays).
    std::int64_t first = 0, last = static_cast<std::int64_t>(blocks.size()) - 1;
    while (first <= last && blocks[static_cast<std::size_t>(first)].max_abs() == 0.0) ++first;
    while (last >= first && blocks[static_cast<std::size_t>(last)].max_abs() == 0.0) --last;
    if (first > last) continue;  // all-zero diagonal
    std::vector<CMatrix> kept(blocks.begin() + first, blocks.begin() + last + 1);
    out.set_diagonal(offset,
                     Diagonal(IndexWindow(window.lo + first, window.lo + last), std::move(kept)));
  }

  if (j.contains("exact_interior")) {
    const json& e = j["exact_interior"];
    if (e.is_null()) {
      out.set_exact_interior(std::nullopt);
    } else {
      out.set_exact_interior(require_window(e, "exact_interior"));
    }
  } else {
    out.set_exact_interior(window);
  }
  return out;
}

NSOperator read_operator_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_operator_json(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string operator_to_json(const NSOperator& f) {
  const IndexWindow w = f.window();
  std::ostringstream os;
  os << "{\n";
  os << "  \"block_size\": " << f.block_size() << ",\n";
  os << "  \"window\": [" << w.lo << ", " << w.hi << "],\n";
  os << "  \"exact_interior\": ";
  if (f.exact_interior()) {
    os << "[" << f.exact_interior()->lo << ", " << f.exact_interior()->hi << "],\n";
  } else {
    os << "null,\n";
  }
  os << "  \"diagonals\": {";
  bool first_diag = true;
  for (const auto& [offset, diag] : f.diagonals()) {
    os << (first_diag ? "\n" : ",\n");
    first_diag = false;
    os << "    \"" << offset << "\": [";
    for (std::int64_t i = w.lo; i <= w.hi; ++i) {
      if (i != w.lo) os << ",";
      const CMatrix b = diag.block_at(i);
      os << "[";
      for (int r = 0; r < b.rows(); ++r) {
        if (r != 0) os << ",";
        os << "[";
        for (int c = 0; c < b.cols(); ++c) {
          if (c != 0) os << ",";
          os << "[" << fmt(b(r, c).real()) << "," << fmt(b(r, c).imag()) << "]";
        }
        os << "]";
      }
      os << "]";
    }
    os << "]";
  }
  os << (first_diag ? "}\n" : "\n  }\n");
  os << "}\n";
  return os.str();
}

void write_text_file(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("short write to '" + path + "'");
}

void write_operator_file(const NSOperator& f, const std::string& path) {
  write_text_file(operator_to_json(f), path);
}

std::string norm_report_to_json(const NormReport& r) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"wiener\": " << fmt(r.wiener) << ",\n";
  os << "  \"hilbert_schmidt\": " << fmt(r.hilbert_schmidt) << ",\n";
  os << "  \"operator_norm_estimate\": " << fmt(r.operator_norm_estimate) << "\n";
  os << "}\n";
  return os.str();
}

std::string factorization_report_to_json(const FactorizationReport& r) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"accepted_window\": [" << r.accepted_window.lo << ", " << r.accepted_window.hi
     << "],\n";
  os << "  \"reconstruction_residual\": " << fmt(r.reconstruction_residual) << ",\n";
  os << "  \"inverse_residual\": " << fmt(r.inverse_residual) << ",\n";
  os << "  \"stabilization_gap\": " << fmt(r.stabilization_gap) << ",\n";
  os << "  \"min_eig_certificate\": " << fmt(r.min_eig_certificate) << ",\n";
  os << "  \"tail_mass\": " << fmt(r.tail_mass) << ",\n";
  os << "  \"decay_rho\": " << fmt(r.decay_rho) << ",\n";
  os << "  \"decay_ok\": " << (r.decay_ok ? "true" : "false") << ",\n";
  os << "  \"pad\": " << r.pad << ",\n";
  os << "  \"tol\": " << fmt(r.tol) << ",\n";
  os << "  \"eps_tail\": " << fmt(r.eps_tail) << ",\n";
  os << "  \"max_offset\": " << r.max_offset << "\n";
  os << "}\n";
  return os.str();
}

std::string verification_to_json(const VerificationResult& v,
                                 const std::vector<double>& t_samples) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"passed\": " << (v.passed ? "true" : "false") << ",\n";
  os << "  \"reconstruction_residual\": " << fmt(v.reconstruction_residual) << ",\n";
  os << "  \"circle_residual\": " << fmt(v.circle_residual) << ",\n";
  os << "  \"inverse_residual\": " << fmt(v.inverse_residual) << ",\n";
  os << "  \"uniqueness_difference\": " << fmt(v.uniqueness_difference) << ",\n";
  os << "  \"t_samples\": [";
  for (std::size_t i = 0; i < t_samples.size(); ++i) {
    if (i) os << ", ";
    os << fmt(t_samples[i]);
  }
  os << "]\n";
  os << "}\n";
  return os.str();
}

}  // namespace nswiener
