// resolvex command-line front end over the C interface.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "resolvex/resolvex.h"

namespace {

using json = nlohmann::json;

struct Handle {
  rvx_automaton* a = nullptr;
  ~Handle() { rvx_automaton_free(a); }
};

struct Owned {
  char* s = nullptr;
  ~Owned() { rvx_string_free(s); }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int fail_usage(const std::string& msg) {
  std::cerr << "resolvex: " << msg << "\n";
  return RVX_ERR_USAGE;
}

// Prints a report; JSON reports get the command line echoed into them.
int emit(rvx_status st, char* text, const std::vector<std::string>& argv, bool raw) {
  Owned out{text};
  if (!out.s) return st;
  std::string s = out.s;
  bool is_error = st >= RVX_ERR_USAGE;
  if (!raw || is_error) {
    auto j = json::parse(s, nullptr, false);
    if (!j.is_discarded() && j.is_object()) {
      j["command"] = argv;
      s = j.dump(2) + "\n";
    }
  }
  (is_error ? std::cerr : std::cout) << s;
  return st;
}

int load(const std::string& path, Handle& h, const std::vector<std::string>& argv) {
  char* err = nullptr;
  rvx_status st = rvx_automaton_load(path.c_str(), &h.a, &err);
  if (st != RVX_OK) emit(st, err, argv, false);
  return st;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  args.erase(args.begin());

  rvx_options opts;
  rvx_options_init(&opts);
  if (const char* env = std::getenv("RESOLVEX_SEED")) {
    try {
      opts.seed = std::stoull(env);
    } catch (const std::exception&) {
      return fail_usage("RESOLVEX_SEED must be an unsigned integer");
    }
  }

  CLI::App app{"Stochastic resolvers for nondeterministic finite automata"};
  app.set_version_flag("--version", std::string(rvx_version()));
  app.require_subcommand(1);
  bool timing = false;
  app.add_option("--jobs", opts.jobs, "support-level parallelism")->check(CLI::PositiveNumber);
  app.add_option("--seed", opts.seed, "random seed (default $RESOLVEX_SEED or 1)");
  app.add_flag("--timing", timing, "add wall-clock time to reports");
  app.add_option("--degree-cap", opts.degree_cap, "largest ambiguity degree searched")->check(CLI::PositiveNumber);

  std::string file;
  auto* classify = app.add_subcommand("classify", "ambiguity class and degree");
  classify->add_option("FILE", file)->required();

  uint32_t max_len = 0;
  auto* check_pr = app.add_subcommand("check-pr", "positive resolvability");
  check_pr->add_option("FILE", file)->required();
  check_pr->add_option("--max-bad-word-len", max_len, "cap on bad-word length (0 = none)");

  bool maximize = false;
  std::string lambda;
  auto* lam = app.add_subcommand("lambda", "optimal threshold or a threshold check");
  lam->add_option("FILE", file)->required();
  auto* maxflag = lam->add_flag("--maximize", maximize, "search for the best threshold");
  auto* lamopt = lam->add_option("--lambda", lambda, "threshold p/q to check");
  maxflag->excludes(lamopt);
  for (auto* sc : {lam}) {
    sc->add_option("--starts", opts.starts)->check(CLI::PositiveNumber);
    sc->add_option("--iters", opts.iterations)->check(CLI::NonNegativeNumber);
    sc->add_option("--tol", opts.tolerance)->check(CLI::PositiveNumber);
    sc->add_option("--seed", opts.seed);
  }

  auto* check_lambda = app.add_subcommand("check-lambda", "is the automaton lambda-resolvable");
  check_lambda->add_option("FILE", file)->required();
  check_lambda->add_option("LAMBDA", lambda, "threshold p/q")->required();
  check_lambda->add_option("--starts", opts.starts)->check(CLI::PositiveNumber);
  check_lambda->add_option("--iters", opts.iterations)->check(CLI::NonNegativeNumber);

  auto* synth = app.add_subcommand("synthesize", "build a resolver");
  synth->add_option("FILE", file)->required();

  std::string resolver_file, word;
  uint64_t mc = 0;
  auto* eval = app.add_subcommand("eval", "acceptance probability of a word");
  eval->add_option("FILE", file)->required();
  eval->add_option("--resolver", resolver_file, "resolver file (default: weights of a pfa input)");
  eval->add_option("--word", word, "word, eps for the empty word")->required();
  eval->add_option("--mc", mc, "Monte Carlo samples");

  std::string support;
  auto* prim = app.add_subcommand("primitives", "primitive words and their constraint polynomials");
  prim->add_option("FILE", file)->required();
  prim->add_option("--support", support, "full or a list of dropped transitions");

  std::string format = "native";
  auto* cons = app.add_subcommand("constraints", "constraint system export");
  cons->add_option("FILE", file)->required();
  cons->add_option("--format", format)->check(CLI::IsMember({"native", "smt"}));
  cons->add_option("--support", support);
  cons->add_option("--lambda", lambda, "fixed threshold instead of a symbolic one");

  auto* unary = app.add_subcommand("unary", "unary positive resolvability");
  unary->add_option("FILE", file)->required();
  unary->add_option("--period-cap", opts.period_cap)->check(CLI::PositiveNumber);

  auto* markov = app.add_subcommand("markov", "limit distributions of a Markov chain");
  markov->add_option("FILE", file)->required();
  markov->add_option("--period-cap", opts.period_cap)->check(CLI::PositiveNumber);

  std::string witness;
  auto* verify = app.add_subcommand("verify", "re-check a witness from a report");
  verify->add_option("FILE", file)->required();
  verify->add_option("--witness", witness)->required();
  verify->add_option("--support", support);

  bool gamma = false;
  auto* dot = app.add_subcommand("dot", "Graphviz export");
  dot->add_option("FILE", file)->required();
  dot->add_flag("--gamma", gamma, "export the run automaton instead");
  dot->add_option("--support", support);

  auto* gen = app.add_subcommand("gen", "generate construction instances");
  gen->require_subcommand(1);
  int m = 0, n = 0;
  auto* spectrum = gen->add_subcommand("spectrum", "threshold m/n instance");
  spectrum->add_option("M", m)->required();
  spectrum->add_option("N", n)->required();
  std::string cycles;
  auto* unary_hard = gen->add_subcommand("unary-hard", "unary hardness instance from cycles like 2:0,1;3:*");
  unary_hard->add_option("SPEC", cycles)->required();
  std::vector<std::string> files;
  auto* pspace = gen->add_subcommand("pspace-hard", "hardness instance from DFAs over {a,b}");
  pspace->add_option("FILES", files)->required();
  auto* undec = gen->add_subcommand("undec", "undecidability gadget for a simple pfa");
  undec->add_option("FILE", file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : RVX_ERR_USAGE;
  }
  opts.timing = timing ? 1 : 0;
  opts.max_bad_word_len = max_len;

  try {
    auto run = [&](auto call, bool raw) {
      char* o = nullptr;
      rvx_status st = call(&o);
      return emit(st, o, args, raw);
    };
    char* out = nullptr;
    if (gen->parsed()) {
      rvx_status st;
      if (spectrum->parsed()) {
        st = rvx_gen_spectrum(m, n, &out);
      } else if (unary_hard->parsed()) {
        st = rvx_gen_unary_hard(cycles.c_str(), &out);
      } else if (pspace->parsed()) {
        std::vector<Handle> hs(files.size());
        std::vector<const rvx_automaton*> ptrs;
        for (size_t i = 0; i < files.size(); ++i) {
          if (int st2 = load(files[i], hs[i], args)) return st2;
          ptrs.push_back(hs[i].a);
        }
        st = rvx_gen_pspace_hard(ptrs.data(), ptrs.size(), &out);
      } else {
        Handle h;
        if (int st2 = load(file, h, args)) return st2;
        st = rvx_gen_undec(h.a, &out);
      }
      return emit(st, out, args, true);
    }
    if (markov->parsed()) {
      std::string text = read_file(file);
      return run([&](char** o) { return rvx_markov(text.c_str(), &opts, o); }, false);
    }

    Handle h;
    if (int st = load(file, h, args)) return st;
    const char* sup = support.empty() ? nullptr : support.c_str();
    if (classify->parsed()) return run([&](char** o) { return rvx_classify(h.a, &opts, o); }, false);
    if (check_pr->parsed()) return run([&](char** o) { return rvx_check_pr(h.a, &opts, o); }, false);
    if (lam->parsed()) {
      if (!maximize && lambda.empty()) return fail_usage("lambda needs --maximize or --lambda p/q");
      rvx_status st = maximize ? rvx_lambda_maximize(h.a, &opts, &out) : rvx_lambda_check(h.a, lambda.c_str(), &opts, &out);
      return emit(st, out, args, false);
    }
    if (check_lambda->parsed()) return run([&](char** o) { return rvx_lambda_check(h.a, lambda.c_str(), &opts, o); }, false);
    if (synth->parsed()) return run([&](char** o) { return rvx_synthesize(h.a, &opts, o); }, false);
    if (eval->parsed()) {
      std::string rtext;
      if (!resolver_file.empty()) rtext = read_file(resolver_file);
      rvx_status st = rvx_eval(h.a, resolver_file.empty() ? nullptr : rtext.c_str(), word.c_str(), mc, &opts, &out);
      return emit(st, out, args, false);
    }
    if (prim->parsed()) return run([&](char** o) { return rvx_primitives(h.a, sup, &opts, o); }, false);
    if (cons->parsed()) {
      rvx_format f = format == "smt" ? RVX_FORMAT_SMT : RVX_FORMAT_NATIVE;
      rvx_status st = rvx_constraints(h.a, sup, lambda.empty() ? nullptr : lambda.c_str(), f, &out);
      return emit(st, out, args, true);
    }
    if (unary->parsed()) return run([&](char** o) { return rvx_unary(h.a, &opts, o); }, false);
    if (verify->parsed()) return run([&](char** o) { return rvx_verify_witness(h.a, sup, witness.c_str(), o); }, false);
    if (dot->parsed()) return run([&](char** o) { return rvx_dot(h.a, gamma ? 1 : 0, sup, o); }, true);
  } catch (const std::exception& e) {
    std::cerr << "resolvex: " << e.what() << "\n";
    return RVX_ERR_INPUT;
  }
  return fail_usage("no command");
}
