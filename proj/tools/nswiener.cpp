// Command line front end: file-based operator algebra, Zadeh evaluation,
// and spectral factorization with verification.
//
// Exit codes: 0 success (for `factor`/`verify`, verification passed),
// 1 verification failed or unexpected error, 2 parse error, 3 dimension
// mismatch, 4 positivity failure (certificate printed), 5 stabilization
// failure, 6 domain error.
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nswiener/algebra.hpp"
#include "nswiener/errors.hpp"
#include "nswiener/factorization.hpp"
#include "nswiener/operator_io.hpp"
#include "nswiener/zadeh.hpp"

namespace {

using namespace nswiener;

Complex parse_z(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw ParseError("--z expects \"re,im\"");
  try {
    std::size_t done = 0;
    const double re = std::stod(s.substr(0, comma), &done);
    if (done != comma) throw ParseError("--z real part is not a number");
    const std::string imag_text = s.substr(comma + 1);
    const double im = std::stod(imag_text, &done);
    if (done != imag_text.size()) throw ParseError("--z imaginary part is not a number");
    return Complex(re, im);
  } catch (const std::invalid_argument&) {
    throw ParseError("--z expects \"re,im\" with numeric parts");
  } catch (const std::out_of_range&) {
    throw ParseError("--z parts are out of range");
  }
}

std::vector<double> parse_samples(const std::string& s) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = s.find(',', pos);
    const std::string piece =
        s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (piece.empty()) throw ParseError("--t-samples has an empty entry");
    try {
      std::size_t done = 0;
      out.push_back(std::stod(piece, &done));
      if (done != piece.size()) throw ParseError("--t-samples entry '" + piece + "' is not a number");
    } catch (const std::invalid_argument&) {
      throw ParseError("--t-samples entry '" + piece + "' is not a number");
    } catch (const std::out_of_range&) {
      throw ParseError("--t-samples entry '" + piece + "' is out of range");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

int cmd_multiply(const std::string& a_path, const std::string& b_path, const std::string& out) {
  const NSOperator a = read_operator_file(a_path);
  const NSOperator b = read_operator_file(b_path);
  if (a.block_size() != b.block_size()) {
    throw DimensionError("block size mismatch: " + std::to_string(a.block_size()) + " vs " +
                         std::to_string(b.block_size()));
  }
  write_operator_file(multiply(a, b), out);
  return 0;
}

int cmd_adjoint(const std::string& path, const std::string& out) {
  write_operator_file(adjoint(read_operator_file(path)), out);
  return 0;
}

int cmd_norm(const std::string& path) {
  std::cout << norm_report_to_json(norms(read_operator_file(path)));
  return 0;
}

int cmd_zadeh(const std::string& path, const std::string& z_text, const std::string& out) {
  const NSOperator f = read_operator_file(path);
  const ZadehEvaluation ev = zadeh_eval(f, parse_z(z_text));
  if (out.empty()) {
    std::cout << operator_to_json(ev.result);
  } else {
    write_operator_file(ev.result, out);
  }
  return 0;
}

int cmd_factor(const std::string& w_path, const std::string& prefix, std::int64_t pad, double tol,
               double eps_tail, std::int64_t max_offset, const std::string& samples_text) {
  const NSOperator w = read_operator_file(w_path);
  FactorizationOptions opts;
  opts.eps_tail = eps_tail;
  opts.max_offset = max_offset;
  const FactorizationReport report = spectral_factor(w, pad, tol, opts);
  write_operator_file(report.factor, prefix + ".factor.json");
  write_operator_file(report.inverse_factor, prefix + ".inverse.json");
  write_text_file(factorization_report_to_json(report), prefix + ".report.json");
  const std::vector<double> t = parse_samples(samples_text);
  const VerificationResult v = verify_factorization(w, report, t);
  std::cout << verification_to_json(v, t);
  return v.passed ? 0 : 1;
}

int cmd_verify(const std::string& w_path, const std::string& factor_path, std::int64_t pad,
               double tol, double eps_tail, std::int64_t max_offset,
               const std::string& samples_text) {
  const NSOperator w = read_operator_file(w_path);
  const NSOperator factor = read_operator_file(factor_path);
  if (w.block_size() != factor.block_size()) {
    throw DimensionError("block size mismatch between operator and factor files");
  }
  const std::int64_t offsets =
      max_offset >= 0 ? max_offset : std::max<std::int64_t>(8 * w.support_radius(), 40);
  const InverseResult inv = triangular_inverse(factor, eps_tail, offsets);
  FactorizationReport report{
      factor, inv.inverse,
      factor.exact_interior() ? *factor.exact_interior() : factor.window()};
  report.pad = pad;
  report.tol = tol;
  report.eps_tail = eps_tail;
  report.max_offset = offsets;
  report.tail_mass = inv.tail_mass;
  report.decay_rho = inv.decay_rho;
  report.decay_ok = inv.decay_ok;
  const std::vector<double> t = parse_samples(samples_text);
  const VerificationResult v = verify_factorization(w, report, t);
  std::cout << verification_to_json(v, t);
  return v.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"diagonal-form block operator toolkit"};
  app.require_subcommand(1);
  int code = 0;

  std::string a_path, b_path, out_path, w_path, factor_path, prefix;
  std::string z_text, samples_text = "0,1.0,2.5";
  std::int64_t pad = 10, max_offset = -1;
  double tol = 1e-6, eps_tail = 1e-10;

  auto* mul = app.add_subcommand("multiply", "write the product of two operator files");
  mul->add_option("a", a_path, "left operand")->required();
  mul->add_option("b", b_path, "right operand")->required();
  mul->add_option("out", out_path, "output file")->required();
  mul->callback([&] { code = cmd_multiply(a_path, b_path, out_path); });

  auto* adj = app.add_subcommand("adjoint", "write the adjoint of an operator file");
  adj->add_option("file", a_path, "input operator")->required();
  adj->add_option("out", out_path, "output file")->required();
  adj->callback([&] { code = cmd_adjoint(a_path, out_path); });

  auto* nrm = app.add_subcommand("norm", "print the norm report of an operator file");
  nrm->add_option("file", a_path, "input operator")->required();
  nrm->callback([&] { code = cmd_norm(a_path); });

  auto* zad = app.add_subcommand("zadeh", "evaluate the diagonal expansion at a point z");
  zad->add_option("file", a_path, "input operator")->required();
  zad->add_option("--z", z_text, "evaluation point \"re,im\"")->required();
  zad->add_option("out", out_path, "output file (stdout when omitted)");
  zad->callback([&] { code = cmd_zadeh(a_path, z_text, out_path); });

  auto* fac = app.add_subcommand("factor", "spectral factorization W = U* U with verification");
  fac->add_option("w", w_path, "self-adjoint operator file")->required();
  fac->add_option("prefix", prefix, "output prefix for .factor/.inverse/.report files")
      ->required();
  fac->add_option("--pad", pad, "section padding depth (doubled for the check pass)");
  fac->add_option("--tol", tol, "stabilization and verification tolerance");
  fac->add_option("--eps-tail", eps_tail, "inverse expansion tail cutoff");
  fac->add_option("--max-offset", max_offset, "inverse offset cap (-1 = automatic)");
  fac->add_option("--t-samples", samples_text, "comma separated circle sample angles");
  fac->callback([&] {
    code = cmd_factor(w_path, prefix, pad, tol, eps_tail, max_offset, samples_text);
  });

  auto* ver = app.add_subcommand("verify", "re-check a factor file against its operator");
  ver->add_option("w", w_path, "self-adjoint operator file")->required();
  ver->add_option("factor", factor_path, "factor file")->required();
  ver->add_option("--pad", pad, "padding depth for the comparison re-run");
  ver->add_option("--tol", tol, "verification tolerance");
  ver->add_option("--eps-tail", eps_tail, "inverse expansion tail cutoff");
  ver->add_option("--max-offset", max_offset, "inverse offset cap (-1 = automatic)");
  ver->add_option("--t-samples", samples_text, "comma separated circle sample angles");
  ver->callback([&] {
    code = cmd_verify(w_path, factor_path, pad, tol, eps_tail, max_offset, samples_text);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const DimensionError& e) {
    std::cerr << "dimension error: " << e.what() << "\n";
    return 3;
  } catch (const PositivityError& e) {
    char cert[40];
    std::snprintf(cert, sizeof cert, "%.17g", e.certificate());
    std::cerr << "not positive definite: " << e.what() << " (certificate " << cert << ")\n";
    return 4;
  } catch (const StabilizationError& e) {
    std::cerr << "stabilization failure: " << e.what() << "\n";
    return 5;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 6;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return code;
}
