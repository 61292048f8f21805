// Serial vs OpenMP timings for the two data-parallel kernels: obligation
// sampling and falsification trials. Results must agree between paths.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "CLI11.hpp"
#include "dlcert/corpus.hpp"
#include "dlcert/falsify.hpp"
#include "dlcert/oracle.hpp"

using namespace dlcert;

namespace {

double seconds(const std::function<void()>& fn, int repeat) {
  double best = 1e300;
  for (int i = 0; i < repeat; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

int g_disagreements = 0;

void row(const char* name, double serial, double parallel, bool agree) {
  g_disagreements += !agree;
  std::printf("%-34s %10.4f %10.4f %8.2fx  %s\n", name, serial, parallel, serial / parallel,
              agree ? "agree" : "DISAGREE");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kernel benchmark"};
  std::string root = DLCERT_CORPUS_DIR;
  std::size_t samples = 200000, trials = 500;
  int repeat = 3;
  app.add_option("--root", root, "Corpus directory");
  app.add_option("--samples", samples, "Samples per obligation");
  app.add_option("--trials", trials, "Falsification trials");
  app.add_option("--repeat", repeat, "Repetitions, best time reported");
  CLI11_PARSE(app, argc, argv);

  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%-34s %10s %10s %9s\n", "kernel", "serial s", "omp s", "speedup");

  // Obligations with no counterexample make the search scan every sample.
  const std::pair<const char*, Obligation> obligations[] = {
      {"sample: mass-action sign",
       {{parse_formula("A >= 0"), parse_formula("B >= 0"), parse_formula("kr > 0")},
        parse_formula("A*kr + B*kr >= 0"),
        "bench"}},
      {"sample: Taylor premise",
       {{parse_formula("t >= 0"), parse_formula("t <= 1/(2*k)"), parse_formula("k > 0"),
         parse_formula("x >= 0")},
        parse_formula("k*x*(1 - 2*k*t) >= 0"),
        "bench"}},
  };
  for (const auto& [name, ob] : obligations) {
    std::optional<SampleHit> s, p;
    double ts = seconds([&] { s = search_counterexample(ob, 0, samples, false); }, repeat);
    double tp = seconds([&] { p = search_counterexample(ob, 0, samples, true); }, repeat);
    bool agree = s.has_value() == p.has_value() && (!s || (s->index == p->index && s->point == p->point));
    row(name, ts, tp, agree);
  }

  for (const auto& e : load_corpus(root)) {
    if (e.name != "bangbang" && e.name != "rev_basic") continue;
    FalsifyOptions o;
    o.trials = trials;
    std::optional<FalsifyResult> s, p;
    o.parallel = false;
    double ts = seconds([&] { s = falsify(e.model, o); }, repeat);
    o.parallel = true;
    double tp = seconds([&] { p = falsify(e.model, o); }, repeat);
    bool agree = s.has_value() == p.has_value() &&
                 (!s || (s->violation.trial == p->violation.trial &&
                         s->violation.residual == p->violation.residual));
    row(("falsify: " + e.name).c_str(), ts, tp, agree);
  }
  return g_disagreements ? 1 : 0;
}
