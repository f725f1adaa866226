#include "qrw/qrel.hpp"
#include "qrw/qtrs.hpp"
#include "qrw/quantale.hpp"
#include "qrw/search.hpp"
#include "qrw/systems.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <string>

using namespace qrw;
using namespace qrw::systems;

namespace {

std::string random_dna(std::mt19937& rng, std::size_t len) {
    static constexpr char kBases[] = "ACGT";
    std::uniform_int_distribution<int> pick(0, 3);
    std::string s;
    for (std::size_t i = 0; i < len; ++i) s += kBases[pick(rng)];
    return s;
}

void BM_LawvereTensor(benchmark::State& state) {
    const Quantale& q = Quantale::get(QuantaleKind::Lawvere);
    QValue a = q.make(Rational(3, 7)), b = q.make(Rational(5, 11));
    for (auto _ : state) {
        a = q.tensor(a, b);
        benchmark::DoNotOptimize(a);
        if (state.iterations() % 64 == 0) a = q.make(Rational(3, 7));
    }
}
BENCHMARK(BM_LawvereTensor);

void BM_QRelStar(benchmark::State& state) {
    const Quantale& q = Quantale::get(QuantaleKind::Lawvere);
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> w(1, 9), coin(0, 3);
    FiniteQRel r(q);
    for (std::size_t i = 0; i < n; ++i) r.add_node("v" + std::to_string(i));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && coin(rng) == 0) r.set(i, j, q.make(Rational(w(rng))));
    for (auto _ : state) benchmark::DoNotOptimize(star(r));
}
BENCHMARK(BM_QRelStar)->Arg(8)->Arg(16)->Arg(32);

void BM_LevenshteinDistance(benchmark::State& state) {
    RewriteSystem sys = make_dna();
    StepRelation rel(sys);
    std::mt19937 rng(11);
    const auto len = static_cast<std::size_t>(state.range(0));
    Term s = dna_term(random_dna(rng, len)), t = dna_term(random_dna(rng, len));
    for (auto _ : state) benchmark::DoNotOptimize(reduction_distance(rel, s, t));
}
BENCHMARK(BM_LevenshteinDistance)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_HammingConvert(benchmark::State& state) {
    RewriteSystem sys = make_dna(DnaVariant::Hamming);
    StepRelation rel(sys);
    std::mt19937 rng(13);
    const auto len = static_cast<std::size_t>(state.range(0));
    Term s = dna_term(random_dna(rng, len)), t = dna_term(random_dna(rng, len));
    for (auto _ : state) benchmark::DoNotOptimize(convertibility_distance(rel, s, t));
}
BENCHMARK(BM_HammingConvert)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_BarycentricCriticalPairs(benchmark::State& state) {
    RewriteSystem sys = make_barycentric();
    for (auto _ : state) benchmark::DoNotOptimize(critical_pairs(sys));
}
BENCHMARK(BM_BarycentricCriticalPairs)->Unit(benchmark::kMillisecond);

void BM_NatConfluenceReport(benchmark::State& state) {
    RewriteSystem sys = make_nat();
    for (auto _ : state) benchmark::DoNotOptimize(confluence_report(sys));
}
BENCHMARK(BM_NatConfluenceReport)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
