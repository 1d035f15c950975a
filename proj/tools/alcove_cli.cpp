#include "alcove/verify.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace alcove;

namespace {

struct Toolkit {
  RootDatum datum;
  Aff aff;
  Pieces pc;
  BComplex bc;
  explicit Toolkit(const std::string& type)
      : datum(build_root_datum(type)), aff(datum), pc(aff), bc(pc) {}
};

std::string default_tables() {
  const char* env = std::getenv("ALCOVE_TABLES");
  return env && *env ? env : "data/tables";
}

// Node names separated by spaces or commas; braces are decoration.
std::vector<int> parse_nodes(const Aff& aff, std::string text) {
  std::map<std::string, int> byname;
  for (std::size_t i = 0; i < aff.nodes; ++i)
    byname[aff.node_name[i]] = static_cast<int>(i);
  for (auto& ch : text)
    if (ch == ',' || ch == '{' || ch == '}') ch = ' ';
  std::vector<int> J;
  std::istringstream is(text);
  std::string token;
  while (is >> token) {
    auto it = byname.find(token);
    if (it == byname.end())
      throw std::invalid_argument("unknown node name: " + token);
    J.push_back(it->second);
  }
  std::sort(J.begin(), J.end());
  J.erase(std::unique(J.begin(), J.end()), J.end());
  return J;
}

// Coordinates separated by spaces or commas, each an integer or a fraction.
QVec parse_nu(std::string text, std::size_t rank) {
  for (auto& ch : text)
    if (ch == ',' || ch == '[' || ch == ']') ch = ' ';
  QVec out;
  std::istringstream is(text);
  std::string token;
  while (is >> token) out.push_back(Rat(token));
  if (out.size() != rank)
    throw std::invalid_argument("nu needs exactly " + std::to_string(rank) +
                                " coordinates");
  return out;
}

void emit(const std::string& report, const std::string& out_path) {
  std::cout << report;
  if (out_path.empty()) return;
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + out_path);
  f << report;
}

std::string render_newton(const EnhancedNewtonPoint& nt) {
  return "(" + to_string(nt.nu) + "," + std::to_string(nt.omega) + ")";
}

int run_pieces(const std::string& type, const std::string& Jtext,
               long long max_len, const std::string& out_path) {
  Toolkit t(type);
  auto J = parse_nodes(t.aff, Jtext);
  auto classes = t.pc.enumerate_classes(J, max_len);

  std::ostringstream os;
  os << "# alcove pieces\n"
     << "# type " << type << "\n"
     << "# J " << t.aff.render_subset(J) << "\n"
     << "# max-len " << max_len << "\n"
     << "rep\tpiece\tlen\tnu\tK\ttype\n";
  for (auto& e : classes) {
    os << t.aff.render(e.rep) << '\t' << t.pc.render_piece(e.piece) << '\t'
       << t.aff.length(e.rep) << '\t' << render_newton(e.piece.newton) << '\t'
       << t.aff.render_subset(e.piece.K) << '\t'
       << t.aff.render_subset(e.piece.coarse_type.rep) << '\n';
  }
  os << "rows " << classes.size() << "\n";
  emit(os.str(), out_path);
  return 0;
}

int run_bcomplex(const std::string& type, const std::string& nu_text,
                 std::size_t omega, long long L, std::size_t samples,
                 std::uint64_t seed, bool essential_only,
                 const std::string& out_path) {
  Toolkit t(type);
  QVec nu = parse_nu(nu_text, t.aff.rank());
  if (omega >= t.aff.omega_order())
    throw std::invalid_argument(
        "omega index out of range: the torsion group has order " +
        std::to_string(t.aff.omega_order()));
  EnhancedNewtonPoint nt{nu, omega};

  auto B = t.bc.build(nt, L);
  DownwardSpec spec =
      essential_only
          ? t.bc.downward_spec(B, {})
          : t.bc.downward_spec(B, {{L, t.pc.coarse_type_of({})}});

  std::set<Piece> essential;
  for (std::size_t i = 0; i < B.facets.size(); ++i)
    if (B.essential[i]) essential.insert(B.facets[i]);
  const std::vector<Piece>& shown = essential_only ? spec.facets : B.facets;

  std::ostringstream os;
  os << "# alcove bcomplex\n"
     << "# type " << type << "\n"
     << "# nu " << to_string(nu) << "\n"
     << "# omega " << omega << "\n"
     << "# L " << L << "\n"
     << "# samples " << samples << "\n"
     << "# seed " << seed << "\n"
     << "# essential-only " << (essential_only ? "yes" : "no") << "\n"
     << "nu-tilde " << render_newton(B.nu_tilde) << "\n"
     << "essential-length " << to_string(B.essential_length) << "\n";

  std::map<std::size_t, std::size_t> by_walls;
  for (auto& p : shown) ++by_walls[p.J.size()];
  os << "facets " << shown.size() << " (by wall count:";
  for (auto& kv : by_walls)
    os << " " << kv.first << ":" << kv.second;
  os << ")\n";

  std::map<Piece, std::size_t> shown_index;
  for (std::size_t i = 0; i < shown.size(); ++i) shown_index.emplace(shown[i], i);
  for (std::size_t i = 0; i < shown.size(); ++i)
    os << "facet " << i << ": " << t.pc.render_piece(shown[i])
       << " len=" << t.aff.length(shown[i].u)
       << (essential.count(shown[i]) ? " essential" : "") << "\n";

  os << "closure";
  for (auto& pr : B.order) {
    if (pr.first == pr.second) continue;
    auto a = shown_index.find(B.facets[pr.first]);
    auto b = shown_index.find(B.facets[pr.second]);
    if (a == shown_index.end() || b == shown_index.end()) continue;
    os << " " << a->second << "<" << b->second;
  }
  os << "\n";

  auto rep = t.bc.verify_contraction(B, spec, samples, seed);
  std::map<Piece, std::pair<std::size_t, std::size_t>> flow;  // samples, violations
  for (auto& fc : rep.checks) {
    auto& slot = flow[fc.facet];
    slot.first += 1;
    slot.second += fc.violations.size();
  }
  for (auto& p : spec.facets) {
    auto& slot = flow[p];
    os << "flow " << t.pc.render_piece(p) << ": " << slot.first
       << " samples, " << slot.second << " violations\n";
  }
  os << "violations " << rep.violation_count << "\n";
  emit(os.str(), out_path);
  return rep.violation_count == 0 ? 0 : 1;
}

int run_verify(const std::string& tables, const std::vector<std::string>& only,
               std::uint64_t seed, const std::string& out_path) {
  VerifyOptions opt;
  opt.tables_dir = tables;
  opt.only = only;
  opt.seed = seed;
  auto results = run_verification(opt);

  std::ostringstream os;
  os << "# alcove verify\n"
     << "# seed " << seed << "\n"
     << "# tables " << tables << "\n";
  if (!only.empty()) {
    os << "# only";
    for (auto& n : only) os << " " << n;
    os << "\n";
  }
  std::size_t passed = 0;
  for (auto& r : results) {
    os << (r.pass ? "pass " : "FAIL ") << r.slug << ": " << r.detail << "\n";
    if (r.pass) ++passed;
  }
  os << "passed " << passed << " of " << results.size() << "\n";
  emit(os.str(), out_path);

  for (auto& r : results) {
    std::ostringstream ts;
    ts.setf(std::ios::fixed);
    ts.precision(2);
    ts << r.seconds;
    std::cerr << "# " << r.slug << " " << ts.str() << "s\n";
  }
  return passed == results.size() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"alcove: stratified combinatorics of extended affine Weyl groups"};
  app.require_subcommand(1);

  std::string p_type = "A1:sc", p_J, p_out;
  long long p_max_len = 2;
  auto* pieces = app.add_subcommand(
      "pieces", "enumerate twisted conjugation classes and their pieces");
  pieces->add_option("--type", p_type, "root datum, e.g. A1:sc, A1:ad, C2:sc, G2");
  pieces->add_option("--J", p_J, "finite-type node set, e.g. 's1 s0' or ''");
  pieces->add_option("--max-len", p_max_len, "length bound on class seeds")
      ->check(CLI::NonNegativeNumber);
  pieces->add_option("--out", p_out, "also write the table to this file");

  std::string b_type = "A1:sc", b_nu = "0", b_out;
  std::size_t b_omega = 0, b_samples = 5;
  long long b_L = 2;
  std::uint64_t b_seed = 0x77a9;
  bool b_essential = false;
  auto* bcomplex = app.add_subcommand(
      "bcomplex", "build one truncated complex and check its gradient flow");
  bcomplex->add_option("--type", b_type, "root datum, e.g. A1:sc, A1:ad, C2:sc");
  bcomplex->add_option("--nu", b_nu, "dominant point, e.g. '1' or '1/2,0'");
  bcomplex->add_option("--omega", b_omega, "torsion component index");
  bcomplex->add_option("--L", b_L, "length truncation")
      ->check(CLI::NonNegativeNumber);
  bcomplex->add_option("--samples", b_samples, "flow samples per facet");
  bcomplex->add_option("--seed", b_seed, "sampling seed");
  bcomplex->add_flag("--essential-only", b_essential,
                     "restrict the report to the essential facets");
  bcomplex->add_option("--out", b_out, "also write the report to this file");

  std::string v_tables = default_tables(), v_out;
  std::vector<std::string> v_only;
  std::uint64_t v_seed = VerifyOptions{}.seed;
  auto* verify = app.add_subcommand(
      "verify", "run the acceptance checks; exit 0 only when all pass");
  verify->add_option("--tables", v_tables,
                     "pair table directory (default: ALCOVE_TABLES or data/tables)");
  verify->add_option("--only", v_only, "comma separated criterion slugs")
      ->delimiter(',');
  verify->add_option("--seed", v_seed, "seed for the randomized criteria");
  verify->add_option("--out", v_out, "also write the report to this file");

  try {
    app.parse(argc, argv);
    if (pieces->parsed()) return run_pieces(p_type, p_J, p_max_len, p_out);
    if (bcomplex->parsed())
      return run_bcomplex(b_type, b_nu, b_omega, b_L, b_samples, b_seed,
                          b_essential, b_out);
    return run_verify(v_tables, v_only, v_seed, v_out);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "alcove: " << e.what() << "\n";
    return 2;
  }
}
