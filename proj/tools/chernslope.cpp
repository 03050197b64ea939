// chernslope command-line front end.  JSON on stdout, logs on stderr.
// Exit codes: 0 ok, 2 invalid input, 3 not found or cap hit.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "chernslope/chernslope.hpp"

namespace cs = chernslope;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_invalid = 2;
constexpr int exit_unfinished = 3;

struct param_flags {
  std::string fam = "A0";
  std::int64_t p = 2, r = 1, e = 1, d = 3, g = 0, u = 0, w = 0;
  std::int64_t l = 0;

  void attach(CLI::App* sub) {
    sub->add_option("--family", fam, "A0, A or APRIME")->capture_default_str();
    sub->add_option("--p", p, "characteristic")->capture_default_str();
    sub->add_option("--r", r, "Frobenius iterations")->capture_default_str();
    sub->add_option("--e", e, "twist degree")->capture_default_str();
    sub->add_option("--d", d, "number of tangent sections")->capture_default_str();
    sub->add_option("--l", l, "APRIME: d = 2l (overrides --d)");
    sub->add_option("--g", g, "base genus")->capture_default_str();
    sub->add_option("--u", u, "extra sections (family A)")->capture_default_str();
    sub->add_option("--w", w, "extra fibers (family A)")->capture_default_str();
  }

  cs::arrangement_params build() const {
    cs::arrangement_params params{cs::parse_family(fam), p, r, e, l > 0 ? 2 * l : d, g, u, w};
    cs::validate(params);
    return params;
  }
};

void emit(const cs::json& j) { std::cout << j.dump(2) << '\n'; }

std::vector<std::int64_t> parse_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw cs::domain_error("not an integer list: '" + text + "'");
    }
  }
  return out;
}

unsigned worker_count() {
  if (const char* env = std::getenv("CHERNSLOPE_WORKERS")) {
    try {
      const long n = std::stol(env);
      if (n >= 1) return static_cast<unsigned>(n);
    } catch (const std::logic_error&) {
    }
    std::cerr << "ignoring CHERNSLOPE_WORKERS=" << env << '\n';
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Reads key=value lines; '#' starts a comment.  Keys may carry a
/// "subcommand." prefix to target one subcommand.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cs::domain_error("cannot read config file " + path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int number = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++number;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw cs::domain_error(path + ":" + std::to_string(number) + ": expected key=value");
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

/// Splices config entries in front of the command-line flags; with the
/// take-last policy the command line wins.
std::vector<std::string> with_config(const std::vector<std::string>& args, CLI::App& app) {
  std::optional<std::string> path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!path) return rest;
  std::size_t sub_at = rest.size();
  CLI::App* sub = nullptr;
  for (std::size_t i = 0; i < rest.size(); ++i) {
    for (CLI::App* candidate : app.get_subcommands({})) {
      if (candidate->get_name() == rest[i]) {
        sub = candidate;
        sub_at = i;
        break;
      }
    }
    if (sub) break;
  }
  if (!sub) return rest;
  std::vector<std::string> out(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(sub_at) + 1);
  for (auto [key, value] : read_config(*path)) {
    if (const auto dot = key.find('.'); dot != std::string::npos) {
      if (key.substr(0, dot) != sub->get_name()) continue;
      key = key.substr(dot + 1);
    }
    if (sub->get_option_no_throw("--" + key) == nullptr) continue;
    out.push_back("--" + key + "=" + value);
  }
  out.insert(out.end(), rest.begin() + static_cast<std::ptrdiff_t>(sub_at) + 1, rest.end());
  return out;
}

int status_code(cs::report_status s) { return s == cs::report_status::ok ? exit_ok : exit_unfinished; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact Chern slope computations for root covers of ruled-surface arrangements"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");
  std::string config_path;
  app.add_option("--config", config_path, "key=value file mirroring the flags (flags win)");

  // dedekind
  auto* dedekind = app.add_subcommand("dedekind", "Dedekind sum, HJ expansion and c(a,q)");
  std::int64_t dk_q = 0, dk_a = 0;
  dedekind->add_option("--q", dk_q)->required();
  dedekind->add_option("--a", dk_a)->required();

  // badset
  auto* badset = app.add_subcommand("badset", "Farey bad set F for a prime q");
  std::int64_t bs_q = 0;
  std::string bs_C = "1";
  bool bs_list = false, bs_verify = false;
  badset->add_option("--q", bs_q)->required();
  badset->add_option("--C", bs_C, "neighbourhood constant (rational)")->capture_default_str();
  badset->add_flag("--list", bs_list, "list F and its complement");
  badset->add_flag("--verify", bs_verify, "check the Girstmair bounds exhaustively");

  // arrangement
  auto* arrangement = app.add_subcommand("arrangement", "resolved configuration and log Chern numbers");
  param_flags ar_params;
  bool ar_list = false;
  ar_params.attach(arrangement);
  arrangement->add_flag("--list", ar_list, "include components and nodes");

  // cover
  auto* cover = app.add_subcommand("cover", "Chern numbers of the q-th root cover from a JSON input");
  std::string cv_input;
  bool cv_details = false;
  cover->add_option("--input", cv_input, "JSON with params, q and multiplicities (- for stdin)")->required();
  cover->add_flag("--singularities", cv_details, "list every singularity");

  // search
  auto* search = app.add_subcommand("search", "random asymptotic multiplicity assignment");
  param_flags se_params;
  std::int64_t se_q = 0, se_tries = 100000;
  std::uint64_t se_seed = 0;
  se_params.attach(search);
  search->add_option("--q", se_q)->required();
  search->add_option("--seed", se_seed)->capture_default_str();
  search->add_option("--max-tries", se_tries)->capture_default_str();

  // slope
  auto* slope = app.add_subcommand("slope", "target slope to parameters, optionally through a sampled cover");
  std::string sl_target, sl_eps = "0.01", sl_family = "APRIME", sl_q = "auto";
  std::int64_t sl_p = 2, sl_tries = 100000, sl_components = 200000;
  std::uint64_t sl_seed = 0;
  slope->add_option("--target", sl_target, "target slope x >= 2")->required();
  slope->add_option("--eps", sl_eps)->capture_default_str();
  slope->add_option("--p", sl_p)->capture_default_str();
  slope->add_option("--family", sl_family, "A or APRIME")->capture_default_str();
  slope->add_option("--q", sl_q, "prime for the sampled cover, or auto")->capture_default_str();
  slope->add_option("--seed", sl_seed)->capture_default_str();
  slope->add_option("--max-tries", sl_tries)->capture_default_str();
  slope->add_option("--max-components", sl_components)->capture_default_str();

  // prank
  auto* prank = app.add_subcommand("prank", "genus and p-rank bound of a cyclic cover of P^1");
  std::int64_t pr_q = 0, pr_p = 0;
  std::string pr_mults;
  prank->add_option("--q", pr_q)->required();
  prank->add_option("--p", pr_p)->required();
  prank->add_option("--mults", pr_mults, "comma-separated a_1,...,a_r")->required();

  // nef
  auto* nef = app.add_subcommand("nef", "intersection numbers of K_W with the covering curves");
  param_flags nf_params;
  std::int64_t nf_q = 0, nf_qmax = 1000003;
  bool nf_threshold = false;
  nf_params.attach(nef);
  nef->add_option("--q", nf_q);
  nef->add_flag("--find-threshold", nf_threshold, "smallest prime q >= 17 with all values >= 0");
  nef->add_option("--q-max", nf_qmax)->capture_default_str();

  // sweep
  auto* sweep = app.add_subcommand("sweep", "CSV of cover invariants over the primes of a range");
  param_flags sw_params;
  std::int64_t sw_lo = 101, sw_hi = 2003, sw_tries = 100000;
  std::uint64_t sw_seed = 0;
  sw_params.attach(sweep);
  sweep->add_option("--q-min", sw_lo)->capture_default_str();
  sweep->add_option("--q-max", sw_hi)->capture_default_str();
  sweep->add_option("--seed", sw_seed)->capture_default_str();
  sweep->add_option("--max-tries", sw_tries)->capture_default_str();

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = with_config(args, app);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_invalid;
  } catch (const cs::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_invalid;
  }

  try {
    if (*dedekind) {
      const auto data = cs::dedekind(dk_q, dk_a);
      emit(cs::dedekind_json(data, cs::hj_expand(dk_q, dk_a)));
    } else if (*badset) {
      const cs::exact_rational C = cs::parse_rational(bs_C);
      cs::json out = cs::badset_json(cs::make_bad_set(bs_q, C), bs_list);
      if (bs_verify) out["girstmair"] = cs::girstmair_json(cs::verify_girstmair(bs_q, C));
      emit(out);
    } else if (*arrangement) {
      emit(cs::configuration_json(cs::build_resolution(ar_params.build()), ar_list));
    } else if (*cover) {
      cs::json input;
      try {
        if (cv_input == "-") {
          input = cs::json::parse(std::cin);
        } else {
          std::ifstream in(cv_input);
          if (!in) throw cs::domain_error("cannot read " + cv_input);
          input = cs::json::parse(in);
        }
      } catch (const cs::json::exception& e) {
        throw cs::domain_error(std::string("invalid JSON input: ") + e.what());
      }
      const auto params = cs::params_from_json(input.at("params"));
      const auto config = cs::build_resolution(params);
      const std::int64_t q = input.at("q").get<std::int64_t>();
      std::vector<std::int64_t> nus;
      const cs::json& mults = input.at("multiplicities");
      if (mults.is_array()) {
        nus = mults.get<std::vector<std::int64_t>>();
      } else {
        for (const auto& c : config.components) {
          if (!mults.contains(c.label)) throw cs::domain_error("no multiplicity for component " + c.label);
          nus.push_back(mults.at(c.label).get<std::int64_t>());
        }
      }
      const auto assign = cs::branch_assignment::make(q, nus);
      cs::json out = cs::cover_json(cs::chern_of_cover(config, assign), cv_details);
      if (q >= 17) {
        const auto check = cs::verify_asymptotic(config, assign);
        out["asymptotic"] = check.ok;
        out["bad_nodes"] = check.bad_nodes;
        out["a_chain_nodes"] = check.a_chain_nodes;
      }
      emit(out);
    } else if (*search) {
      const auto params = se_params.build();
      const auto config = cs::build_resolution(params);
      const cs::partition_problem problem{params, se_q};
      const auto result = cs::sample_assignment(config, problem, cs::make_bad_set(se_q, 1), se_seed, se_tries);
      cs::json out = cs::search_json(result, config);
      out["params"] = cs::params_json(params);
      out["q"] = se_q;
      out["seed"] = std::to_string(se_seed);
      if (result.found()) out["cover"] = cs::cover_json(cs::chern_of_cover(config, *result.assignment), false);
      emit(out);
      if (!result.found()) {
        std::cerr << "no asymptotic assignment after " << result.tries << " tries\n";
        return exit_unfinished;
      }
    } else if (*slope) {
      std::optional<std::int64_t> q_hint;
      if (sl_q != "auto") {
        try {
          q_hint = std::stoll(sl_q);
        } catch (const std::logic_error&) {
          throw cs::domain_error("--q must be a prime or 'auto', got " + sl_q);
        }
      }
      cs::pipeline_options options;
      options.max_tries = sl_tries;
      options.max_components = sl_components;
      const auto report = cs::run_pipeline(cs::parse_rational(sl_target), cs::parse_rational(sl_eps), sl_p,
                                           cs::parse_family(sl_family), q_hint, sl_seed, options);
      emit(cs::report_json(report));
      for (const auto& line : report.diagnostics) std::cerr << line << '\n';
      return status_code(report.status);
    } else if (*prank) {
      emit(cs::prank_json(cs::cyclic_cover_data::make(pr_q, pr_p, parse_list(pr_mults))));
    } else if (*nef) {
      const auto params = nf_params.build();
      if (nf_threshold) {
        const std::int64_t q = cs::min_nef_q(params, nf_qmax);
        cs::json out = cs::nef_json(cs::make_nef_report(params, q));
        out["threshold"] = q;
        emit(out);
      } else {
        if (nf_q == 0) throw cs::domain_error("nef needs --q or --find-threshold");
        emit(cs::nef_json(cs::make_nef_report(params, nf_q)));
      }
    } else if (*sweep) {
      const auto params = sw_params.build();
      const unsigned workers = worker_count();
      std::cerr << "sweeping primes in [" << sw_lo << ", " << sw_hi << "] with " << workers << " workers\n";
      std::cout << cs::sweep_csv(cs::sweep(params, sw_lo, sw_hi, sw_seed, sw_tries, workers));
    }
  } catch (const cs::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_invalid;
  } catch (const cs::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_invalid;
  } catch (const cs::cap_exceeded& e) {
    std::cerr << "cap hit: " << e.what() << '\n';
    return exit_unfinished;
  } catch (const cs::degenerate_error& e) {
    std::cerr << "degenerate: " << e.what() << '\n';
    return exit_invalid;
  }
  return exit_ok;
}
