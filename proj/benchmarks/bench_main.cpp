#include <benchmark/benchmark.h>

#include <random>

#include "ynet/components.hpp"
#include "ynet/era.hpp"
#include "ynet/network.hpp"
#include "ynet/stability.hpp"

using namespace ynet;

namespace {

std::mt19937 gen(12345u);

double rnd(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen);
}

Polynomial random_poly(int deg) {
    std::vector<cdouble> c(static_cast<std::size_t>(deg) + 1);
    for (auto& ck : c) ck = cdouble(rnd(-2, 2), 0.0);
    c.back() += cdouble(0.5);
    return Polynomial(std::move(c));
}

TFMatrix random_tf(int n) {
    TFMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m(i, j) = RationalFunction(random_poly(2), random_poly(2));
    return m;
}

void bm_poly_roots(benchmark::State& state) {
    const Polynomial p = random_poly(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(p.roots());
}
BENCHMARK(bm_poly_roots)->Arg(8)->Arg(16)->Arg(32);

void bm_tf_det(benchmark::State& state) {
    const TFMatrix m = random_tf(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(m.det());
}
BENCHMARK(bm_tf_det)->Arg(4)->Arg(6)->Arg(8);

void bm_rma_sweep(benchmark::State& state) {
    components::DfigParams d;
    d.rs = 0.00488;
    d.Xls = 0.09231;
    d.rr = 0.00549;
    d.Xlr = 0.09955;
    d.wm = 0.75;
    d.R = 0.03;
    d.XL = 0.64;
    d.comp = 0.5;
    const auto ys = components::dfig_static_admittance(d);
    TFMatrix y(1, 1);
    y(0, 0) = ys.y_dfig + ys.y_line;
    const auto grid = stability::default_grid(0.1, 100.0, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(stability::rma_sweep(y, grid));
}
BENCHMARK(bm_rma_sweep)->Arg(400);

void bm_era_realize(benchmark::State& state) {
    const int n = 6;
    Eigen::MatrixXd a = Eigen::MatrixXd::Random(n, n) * 10.0;
    a -= (a.eigenvalues().real().maxCoeff() + 1.0) * Eigen::MatrixXd::Identity(n, n);
    const StateSpace sys(a, Eigen::MatrixXd::Random(n, 2), Eigen::MatrixXd::Random(2, n),
                         Eigen::MatrixXd::Zero(2, 2));
    std::vector<era::EventRecord> events;
    for (int ch = 0; ch < 2; ++ch) {
        const TimeSeries ts = step_response(sys, ch, 0.001, 0.5, 2500.0);
        era::EventRecord ev;
        ev.input_channel = "u";
        ev.p = 0.001;
        ev.ts = 1.0 / 2500.0;
        ev.pre_event_samples = 1;
        ev.outputs = ts.y;
        events.push_back(era::preprocess(ev));
    }
    era::EraOptions opts;
    opts.order = n;
    opts.hankel_cols = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(era::era_realize(events, opts));
}
BENCHMARK(bm_era_realize)->Arg(120)->Arg(250);

void bm_power_flow(benchmark::State& state) {
    network::NetworkCase cs;
    const int n = 8;
    for (int i = 0; i < n; ++i)
        cs.buses.push_back({"g" + std::to_string(i), network::BusType::source});
    for (int i = 0; i < n; ++i)
        cs.buses.push_back({"h" + std::to_string(i), network::BusType::passive});
    for (int i = 0; i < n; ++i) {
        cs.branches.push_back({"g" + std::to_string(i), "h" + std::to_string(i), 0.002, 0.05, 0, 0});
        cs.branches.push_back(
            {"h" + std::to_string(i), "h" + std::to_string((i + 1) % n), 0.01, 0.1, 0.02, 0});
        cs.loads.push_back({"h" + std::to_string(i), 0.8, 0.2});
        network::SourceSpec s;
        s.bus = "g" + std::to_string(i);
        s.P = 0.8;
        s.V = 1.02;
        s.params = components::GeneratorParams{4.0, 1.0, 0.25, 1.0, 377.0};
        cs.sources.push_back(s);
    }
    for (auto _ : state) benchmark::DoNotOptimize(network::power_flow(cs));
}
BENCHMARK(bm_power_flow);

}  // namespace

BENCHMARK_MAIN();
