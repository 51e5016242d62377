// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "langsim/pipeline/patterns.hpp"
#include "langsim/router/landscape.hpp"
#include "langsim/service/session.hpp"

using namespace langsim;

namespace {

void BM_OneShotDialogue(benchmark::State& state) {
    const auto& land = router::default_landscape();
    backend::LexiconBackend lexicon;
    pipeline::ExecutionContext ctx;
    const std::string text =
        "mesoscale water sorption with 2D LDFT, the adsorption isotherm at 300 K for [[1,1,1],[1,0,1],[1,1,1]]";
    for (auto _ : state) {
        service::Dialogue d(land);
        auto s = service::new_session("s-bench", land.hierarchy);
        int runs = 0;
        benchmark::DoNotOptimize(service::post_and_run(d, s, text, lexicon, ctx, [&] { return std::to_string(++runs); }));
    }
}
BENCHMARK(BM_OneShotDialogue)->Unit(benchmark::kMicrosecond);

void BM_ExtractMatrix(benchmark::State& state) {
    auto side = static_cast<std::size_t>(state.range(0));
    std::vector<double> cells(side * side, 0.0);
    for (std::size_t i = 0; i < cells.size(); i += 3) cells[i] = 1.0;
    auto text = "use this matrix " + pipeline::serialize_matrix(ldft::PorousMatrix(side, side, cells)) + " at 300 K";
    for (auto _ : state) benchmark::DoNotOptimize(pipeline::extract_matrix(text));
    state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_ExtractMatrix)->Arg(8)->Arg(32)->Arg(128)->Unit(benchmark::kMicrosecond);

}  // namespace
