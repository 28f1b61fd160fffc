#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "spincorr/kernels.hpp"
#include "spincorr/rng.hpp"

using namespace spincorr;

namespace {

CVec random_vec(int n, uint64_t seed) {
    SplitMix64 rng(seed);
    CVec v(static_cast<size_t>(n));
    for (auto& x : v) x = cplx(2.0 * rng.uniform01() - 1.0, 2.0 * rng.uniform01() - 1.0);
    return v;
}

CMat random_mat(int n, uint64_t seed) {
    CMat m(n, n);
    m.a = random_vec(n * n, seed);
    return m;
}

template <class F>
double best_ms(F&& body, int reps) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        body();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

double max_delta(const CVec& a, const CVec& b) {
    double d = 0.0;
    for (size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
    return d;
}

struct Row {
    std::string label;
    double serial_ms, omp_ms, delta;
};

std::vector<Row> rows;

void report(const std::string& label, double serial_ms, double omp_ms, double delta) {
    rows.push_back({label, serial_ms, omp_ms, delta});
}

void bench_matvec(int n, int reps) {
    const CMat m = random_mat(n, 11);
    const CVec x = random_vec(n, 12);
    CVec ys(x.size()), yp(x.size());
    const double ts = best_ms([&] { kernels::serial::matvec(m, x.data(), ys.data()); }, reps);
    const double tp = best_ms([&] { kernels::omp::matvec(m, x.data(), yp.data()); }, reps);
    report("matvec n=" + std::to_string(n), ts, tp, max_delta(ys, yp));
}

void bench_matmul(int n, int reps) {
    const CMat a = random_mat(n, 21);
    const CMat b = random_mat(n, 22);
    CMat cs, cp;
    const double ts = best_ms([&] { cs = kernels::serial::matmul(a, b); }, reps);
    const double tp = best_ms([&] { cp = kernels::omp::matmul(a, b); }, reps);
    report("matmul n=" + std::to_string(n), ts, tp, max_delta(cs.a, cp.a));
}

void bench_kron(int n, int reps) {
    const CMat a = random_mat(n, 31);
    const CMat b = random_mat(n, 32);
    CMat cs, cp;
    const double ts = best_ms([&] { cs = kernels::serial::kron(a, b); }, reps);
    const double tp = best_ms([&] { cp = kernels::omp::kron(a, b); }, reps);
    report("kron n=" + std::to_string(n) + "x" + std::to_string(n), ts, tp, max_delta(cs.a, cp.a));
}

void bench_two_site(int da, int db, int rest, int reps) {
    const CMat op = random_mat(da * db, 41);
    const int n = da * db * rest;
    const CVec psi = random_vec(n, 42);
    CVec outs(psi.size()), outp(psi.size());
    // slots laid out [a, b, rest]: stride_a spans b and the spectator space
    const double ts = best_ms(
        [&] { kernels::serial::apply_two_site(op, psi.data(), outs.data(), n, da, db * rest, db, rest); }, reps);
    const double tp = best_ms(
        [&] { kernels::omp::apply_two_site(op, psi.data(), outp.data(), n, da, db * rest, db, rest); }, reps);
    report("two_site " + std::to_string(da) + "x" + std::to_string(db) + " rest=" + std::to_string(rest), ts, tp,
           max_delta(outs, outp));
}

}  // namespace

int main(int argc, char** argv) {
    bool quick = false;
    for (int k = 1; k < argc; ++k)
        if (std::strcmp(argv[k], "--quick") == 0) quick = true;

    const int reps = quick ? 3 : 7;
    if (quick) {
        bench_matvec(128, reps);
        bench_matmul(96, reps);
        bench_kron(12, reps);
        bench_two_site(9, 2, 17, reps);
    } else {
        bench_matvec(512, reps);
        bench_matvec(1024, reps);
        bench_matmul(256, reps);
        bench_matmul(512, reps);
        bench_kron(33, reps);
        bench_two_site(33, 2, 33, reps);
        bench_two_site(65, 2, 65, reps);
    }

    std::printf("%-24s %12s %12s %9s %10s\n", "kernel", "serial [ms]", "omp [ms]", "speedup", "max|diff|");
    bool identical = true;
    for (const auto& row : rows) {
        std::printf("%-24s %12.3f %12.3f %8.2fx %10.2e\n", row.label.c_str(), row.serial_ms, row.omp_ms,
                    row.omp_ms > 0 ? row.serial_ms / row.omp_ms : 0.0, row.delta);
        if (row.delta != 0.0) identical = false;
    }
    if (!identical) {
        std::printf("FAIL: backends disagree\n");
        return 1;
    }
    std::printf("backends agree bitwise on all cases\n");
    return 0;
}
