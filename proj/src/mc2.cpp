#include "rmc/mc2.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <thread>
#include <utility>

#include "rmc/candidates.hpp"
#include "rmc/rng.hpp"

namespace rmc {

namespace {

inline int mod_norm(std::int64_t a, int z) {
    int r = static_cast<int>(a % z);
    return r < 0 ? r + z : r;
}

void validate_same_shape(const IntMat& a, const IntMat& b, const char* what) {
    if (a.rows != b.rows || a.cols != b.cols) throw std::invalid_argument(what);
}

}  // namespace

Mc2CandidateSet collect_mc2_candidates(const IntMat& support, const std::array<bool, 3>& want,
                                       const IntMat* K_filter) {
    Mc2CandidateSet set;
    set.entry_count = support.rows * support.cols;
    if (K_filter) validate_same_shape(support, *K_filter, "mc2: support/K shape mismatch");
    for (int g = 0; g < 3; ++g) {
        if (!want[g]) continue;
        const int ell = g + 2;
        const int width = Mc2CandidateSet::width(g);
        std::vector<std::int32_t>& out = set.entries[g];
        enumerate_candidates(support, ell, [&](const std::int32_t* e) {
            if (K_filter && !is_active_partitioned(e, ell, *K_filter)) return;
            out.insert(out.end(), e, e + width);
        });
        set.counts[g] = static_cast<std::int64_t>(out.size()) / width;
    }
    return set;
}

std::vector<std::int32_t> build_correlation_tuples(const Mc2CandidateSet& cands,
                                                   const std::vector<std::int32_t>& optimizable,
                                                   int b) {
    if (b < 1) throw std::invalid_argument("mc2: b must be >= 1");
    if (static_cast<std::size_t>(b) > optimizable.size())
        throw std::invalid_argument("mc2: b exceeds the optimizable entry count");
    const std::size_t n = static_cast<std::size_t>(cands.entry_count);
    std::vector<std::int32_t> shared(n * n, 0);
    for (int g = 0; g < 3; ++g) {
        const int width = Mc2CandidateSet::width(g);
        const std::vector<std::int32_t>& ent = cands.entries[g];
        for (std::size_t base = 0; base < ent.size(); base += width) {
            for (int i = 0; i < width; ++i) {
                for (int j = i + 1; j < width; ++j) {
                    const std::size_t a = static_cast<std::size_t>(ent[base + i]);
                    const std::size_t c = static_cast<std::size_t>(ent[base + j]);
                    ++shared[a * n + c];
                    ++shared[c * n + a];
                }
            }
        }
    }
    std::vector<std::int32_t> tuples;
    tuples.reserve(optimizable.size() * static_cast<std::size_t>(b));
    std::vector<std::int32_t> peers;
    for (std::int32_t e : optimizable) {
        tuples.push_back(e);
        if (b == 1) continue;
        peers.clear();
        for (std::int32_t f : optimizable)
            if (f != e) peers.push_back(f);
        const std::int32_t* row = shared.data() + static_cast<std::size_t>(e) * n;
        std::partial_sort(peers.begin(), peers.begin() + (b - 1), peers.end(),
                          [row](std::int32_t p, std::int32_t q) {
                              if (row[p] != row[q]) return row[p] > row[q];
                              return p < q;
                          });
        tuples.insert(tuples.end(), peers.begin(), peers.begin() + (b - 1));
    }
    return tuples;
}

namespace {

// One chain run. State is the flat value vector; every transition re-derives
// the counts of the candidates touched by the tuple (single-touch candidates
// via their unique activating value, multi-touch ones by enumerating the
// solutions of their alternating-sum condition), so a completion is scored in
// O(1) from precomputed tables instead of a full recount.
struct Chain {
    const Mc2Context& ctx;
    const Mc2CandidateSet& cands;
    const Mc2Config& cfg;

    int n = 0;
    int lo = 0, hi = 0, asize = 0;
    bool lifting = false;
    int b = 0;
    std::int64_t ncomp = 0;
    std::vector<std::int64_t> stride;

    std::array<double, 3> w{};
    double census_w = 0.0;

    std::array<std::int64_t, 3> gid_base{};
    std::int64_t total_cands = 0;
    std::vector<std::int64_t> inc_ptr;
    std::vector<std::int32_t> inc_gid;

    std::vector<std::int32_t> x, xinit, optim;
    std::array<std::int64_t, 3> counts{};
    long l1 = 0;
    long b1 = 0, binf = 0;

    int cols = 0;
    int vn_stages = 0;
    std::vector<std::int32_t> colcnt;  // cols x vn_stages

    std::vector<std::int32_t> tuples;
    std::int64_t ntuples = 0;

    std::mt19937_64 rng;

    std::vector<std::int32_t> stamp, posof;
    std::int32_t epoch = 0;
    std::vector<std::int32_t> affected;
    std::vector<std::uint8_t> amask;
    std::vector<std::int32_t> tupidx;
    std::vector<std::int32_t> singles;  // [group][tuple slot][value]
    std::vector<std::int32_t> delta;    // [group][completion]
    std::array<std::int64_t, 3> base_cache{};  // actives untouched by the tuple
    std::vector<double> cbar;           // weighted count per completion, -1 infeasible
    std::vector<double> prob;

    std::vector<std::int32_t> xopt;
    double wopt = 0.0;

    Mc2Result res;

    Chain(const Mc2Context& ctx_, const Mc2CandidateSet& cands_, const Mc2Config& cfg_)
        : ctx(ctx_), cands(cands_), cfg(cfg_) {
        validate_same_shape(ctx.x_init, ctx.fixed_mask, "mc2: state/mask shape mismatch");
        n = ctx.x_init.rows * ctx.x_init.cols;
        if (n != cands.entry_count) throw std::invalid_argument("mc2: candidate set shape mismatch");
        cols = ctx.x_init.cols;
        lo = ctx.value_lo;
        hi = ctx.value_hi;
        if (hi < lo) throw std::invalid_argument("mc2: empty value set");
        asize = hi - lo + 1;
        lifting = ctx.modulus > 0;
        if (lifting && (lo < 0 || hi >= ctx.modulus))
            throw std::invalid_argument("mc2: lifting values must lie in [0, z)");
        b = cfg.b;
        if (b < 1 || b > 8) throw std::invalid_argument("mc2: b out of range");
        ncomp = 1;
        for (int t = 0; t < b; ++t) {
            ncomp *= asize;
            if (ncomp > (std::int64_t{1} << 21))
                throw std::invalid_argument("mc2: value_set^b too large to enumerate");
        }
        stride.assign(static_cast<std::size_t>(b), 1);
        for (int t = b - 2; t >= 0; --t) stride[t] = stride[t + 1] * asize;

        for (int g = 0; g < 3; ++g) w[g] = cfg.weights.at(g + 2);
        census_w = 0.0;
        for (int g = 0; g < 3; ++g) census_w += w[g] * static_cast<double>(cands.counts[g]);
        gid_base = {0, cands.counts[0], cands.counts[0] + cands.counts[1]};
        total_cands = cands.total();

        x = std::vector<std::int32_t>(ctx.x_init.v.begin(), ctx.x_init.v.end());
        xinit = x;
        for (int e = 0; e < n; ++e) {
            if (ctx.fixed_mask.v[static_cast<std::size_t>(e)] != 0) continue;
            // -1 marks entries outside the stage base; they are untouchable and
            // by construction never appear in the candidate pool.
            if (x[static_cast<std::size_t>(e)] < 0) continue;
            if (x[static_cast<std::size_t>(e)] < lo || x[static_cast<std::size_t>(e)] > hi)
                throw std::invalid_argument("mc2: optimizable entry outside the value set");
            optim.push_back(e);
        }

        binf = cfg.budget_linf >= 0 ? cfg.budget_linf : asize;
        b1 = cfg.budget_l1 >= 0
                 ? cfg.budget_l1
                 : (static_cast<long>(optim.size()) * asize + 3) / 4;

        vn_stages = static_cast<int>(ctx.vn_memories.size());
        if (vn_stages > 0) {
            if (!std::is_sorted(ctx.vn_memories.begin(), ctx.vn_memories.end()))
                throw std::invalid_argument("mc2: vn memories must be ascending");
            colcnt.assign(static_cast<std::size_t>(cols) * vn_stages, 0);
            for (int e = 0; e < n; ++e) {
                const int v = x[static_cast<std::size_t>(e)];
                const int j = e % cols;
                for (int d = 0; d < vn_stages; ++d)
                    if (v >= 0 && v <= ctx.vn_memories[d])
                        ++colcnt[static_cast<std::size_t>(j) * vn_stages + d];
            }
            for (int j = 0; j < cols; ++j)
                for (int d = 0; d < vn_stages; ++d)
                    if (colcnt[static_cast<std::size_t>(j) * vn_stages + d] < ctx.vn_min_degree)
                        throw std::invalid_argument("mc2: initial state violates the column-degree floor");
        }

        build_incidence();
        counts = recount(x);
        for (int g = 0; g < 3; ++g)
            if (cfg.frozen_zero[g] && counts[g] != 0)
                throw std::invalid_argument("mc2: initial state violates a pinned-zero group");

        rng = make_engine(derive_key(cfg.seed, 0x6d6332ULL));

        stamp.assign(static_cast<std::size_t>(total_cands), 0);
        posof.assign(static_cast<std::size_t>(total_cands), 0);
        tupidx.assign(static_cast<std::size_t>(n), -1);
        singles.assign(static_cast<std::size_t>(3) * b * asize, 0);
        delta.assign(static_cast<std::size_t>(3) * ncomp, 0);
        cbar.assign(static_cast<std::size_t>(ncomp), -1.0);
        prob.assign(static_cast<std::size_t>(ncomp), 0.0);
    }

    void build_incidence() {
        inc_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
        for (int g = 0; g < 3; ++g) {
            for (std::int32_t e : cands.entries[g]) ++inc_ptr[static_cast<std::size_t>(e) + 1];
        }
        for (int e = 0; e < n; ++e) inc_ptr[static_cast<std::size_t>(e) + 1] += inc_ptr[static_cast<std::size_t>(e)];
        inc_gid.assign(static_cast<std::size_t>(inc_ptr[static_cast<std::size_t>(n)]), 0);
        std::vector<std::int64_t> fill(inc_ptr.begin(), inc_ptr.end() - 1);
        for (int g = 0; g < 3; ++g) {
            const int width = Mc2CandidateSet::width(g);
            const std::vector<std::int32_t>& ent = cands.entries[g];
            for (std::size_t i = 0; i < ent.size(); ++i) {
                const std::int64_t gid = gid_base[static_cast<std::size_t>(g)] +
                                         static_cast<std::int64_t>(i) / width;
                inc_gid[static_cast<std::size_t>(fill[static_cast<std::size_t>(ent[i])]++)] =
                    static_cast<std::int32_t>(gid);
            }
        }
    }

    bool active_alt(std::int64_t alt) const {
        return lifting ? mod_norm(alt, ctx.modulus) == 0 : alt == 0;
    }

    std::array<std::int64_t, 3> recount(const std::vector<std::int32_t>& vals) const {
        std::array<std::int64_t, 3> out{};
        for (int g = 0; g < 3; ++g) {
            const int width = Mc2CandidateSet::width(g);
            const std::vector<std::int32_t>& ent = cands.entries[g];
            for (std::size_t base = 0; base < ent.size(); base += width) {
                std::int64_t alt = 0;
                for (int s = 0; s < width; ++s) {
                    const std::int64_t v = vals[static_cast<std::size_t>(ent[base + s])];
                    alt += (s & 1) ? -v : v;
                }
                out[g] += active_alt(alt) ? 1 : 0;
            }
        }
        return out;
    }

    double weighted(const std::array<std::int64_t, 3>& c) const {
        return w[0] * static_cast<double>(c[0]) + w[1] * static_cast<double>(c[1]) +
               w[2] * static_cast<double>(c[2]);
    }

    IntMat to_mat(const std::vector<std::int32_t>& vals) const {
        IntMat m(ctx.x_init.rows, ctx.x_init.cols);
        std::copy(vals.begin(), vals.end(), m.v.begin());
        return m;
    }

    int group_of(std::int64_t gid) const { return gid >= gid_base[2] ? 2 : (gid >= gid_base[1] ? 1 : 0); }

    bool in_window(int v, int d) const { return v >= 0 && v <= ctx.vn_memories[static_cast<std::size_t>(d)]; }

    // Evaluates every completion of one tuple, updates the best state, samples
    // the next one. Returns true when a zero-count state was found.
    bool transition(const std::int32_t* tup, double theta) {
        if (++epoch == std::numeric_limits<std::int32_t>::max()) {
            std::fill(stamp.begin(), stamp.end(), 0);
            epoch = 1;
        }
        affected.clear();
        amask.clear();
        int cur[8];
        for (int t = 0; t < b; ++t) {
            tupidx[static_cast<std::size_t>(tup[t])] = t;
            cur[t] = x[static_cast<std::size_t>(tup[t])];
        }
        for (int t = 0; t < b; ++t) {
            const std::int32_t e = tup[t];
            for (std::int64_t p = inc_ptr[static_cast<std::size_t>(e)];
                 p < inc_ptr[static_cast<std::size_t>(e) + 1]; ++p) {
                const std::int32_t gid = inc_gid[static_cast<std::size_t>(p)];
                if (stamp[static_cast<std::size_t>(gid)] != epoch) {
                    stamp[static_cast<std::size_t>(gid)] = epoch;
                    posof[static_cast<std::size_t>(gid)] = static_cast<std::int32_t>(affected.size());
                    affected.push_back(gid);
                    amask.push_back(0);
                }
                amask[static_cast<std::size_t>(posof[static_cast<std::size_t>(gid)])] |=
                    static_cast<std::uint8_t>(1u << t);
            }
        }

        std::fill(singles.begin(), singles.end(), 0);
        std::fill(delta.begin(), delta.end(), 0);
        std::array<std::int64_t, 3>& base = base_cache;
        base = counts;

        for (std::size_t k = 0; k < affected.size(); ++k) {
            const std::int64_t gid = affected[k];
            const int g = group_of(gid);
            const int width = Mc2CandidateSet::width(g);
            const std::int32_t* ent =
                cands.entries[g].data() + (gid - gid_base[static_cast<std::size_t>(g)]) * width;
            std::int64_t alt = 0;
            int coeff[8] = {0, 0, 0, 0, 0, 0, 0, 0};
            for (int s = 0; s < width; ++s) {
                const std::int32_t e = ent[s];
                const int sign = (s & 1) ? -1 : 1;
                alt += sign * static_cast<std::int64_t>(x[static_cast<std::size_t>(e)]);
                const std::int32_t ti = tupidx[static_cast<std::size_t>(e)];
                if (ti >= 0) coeff[ti] += sign;
            }
            if (active_alt(alt)) --base[g];

            const std::uint8_t mask = amask[k];
            if ((mask & (mask - 1)) == 0) {  // exactly one tuple entry involved
                const int t = std::countr_zero(static_cast<unsigned>(mask));
                const int st = coeff[t];
                const std::int64_t rest = alt - static_cast<std::int64_t>(st) * cur[t];
                std::int64_t vstar;
                if (lifting) {
                    vstar = mod_norm(-static_cast<std::int64_t>(st) * rest, ctx.modulus);
                } else {
                    vstar = -static_cast<std::int64_t>(st) * rest;
                }
                if (vstar >= lo && vstar <= hi)
                    ++singles[(static_cast<std::size_t>(g) * b + t) * asize + (vstar - lo)];
            } else {
                std::int64_t rest = alt;
                for (int t = 0; t < b; ++t) rest -= static_cast<std::int64_t>(coeff[t]) * cur[t];
                // candidate entries are distinct and so are tuple entries, so
                // every touching slot carries coefficient +-1 and >= 2 slots
                // touch here; solve the last one from the others
                int pivot = -1;
                int nonp[8];
                int nn = 0;
                for (int t = b - 1; t >= 0 && pivot < 0; --t)
                    if (coeff[t] != 0) pivot = t;
                if (pivot < 0) throw std::logic_error("mc2: cross candidate lost its coefficients");
                for (int t = 0; t < b; ++t)
                    if (t != pivot) nonp[nn++] = t;
                const std::int64_t reps = ncomp / asize;
                for (std::int64_t c = 0; c < reps; ++c) {
                    std::int64_t remv = c;
                    std::int64_t sum = rest;
                    std::int64_t idx = 0;
                    for (int q = nn - 1; q >= 0; --q) {
                        const std::int64_t dig = remv % asize;
                        remv /= asize;
                        const int t = nonp[q];
                        sum += static_cast<std::int64_t>(coeff[t]) * (lo + dig);
                        idx += dig * stride[t];
                    }
                    std::int64_t pv;
                    if (lifting) {
                        pv = mod_norm(-static_cast<std::int64_t>(coeff[pivot]) * sum, ctx.modulus);
                    } else {
                        pv = -static_cast<std::int64_t>(coeff[pivot]) * sum;
                    }
                    if (pv < lo || pv > hi) continue;
                    idx += (pv - lo) * stride[pivot];
                    ++delta[static_cast<std::size_t>(g) * ncomp + idx];
                }
            }
        }

        // score all completions
        double wmin = std::numeric_limits<double>::infinity();
        bool early = false;
        for (std::int64_t idx = 0; idx < ncomp; ++idx) {
            int v[8];
            std::int64_t remv = idx;
            for (int t = 0; t < b; ++t) {
                v[t] = lo + static_cast<int>(remv / stride[t]);
                remv %= stride[t];
            }
            cbar[static_cast<std::size_t>(idx)] = -1.0;
            if (!lifting) {
                long l1n = l1;
                bool ok = true;
                for (int t = 0; t < b; ++t) {
                    const long dv = std::labs(static_cast<long>(v[t]) -
                                              xinit[static_cast<std::size_t>(tup[t])]);
                    if (dv > binf) {
                        ok = false;
                        break;
                    }
                    l1n += dv - std::labs(static_cast<long>(cur[t]) -
                                          xinit[static_cast<std::size_t>(tup[t])]);
                }
                if (!ok || l1n > b1) continue;
            }
            if (vn_stages > 0 && !vn_feasible(tup, cur, v)) continue;
            double wact = 0.0;
            bool frozen_ok = true;
            for (int g = 0; g < 3 && frozen_ok; ++g) {
                if (cands.counts[g] == 0) continue;
                std::int64_t ng = base[g] + delta[static_cast<std::size_t>(g) * ncomp + idx];
                for (int t = 0; t < b; ++t)
                    ng += singles[(static_cast<std::size_t>(g) * b + t) * asize + (v[t] - lo)];
                if (cfg.frozen_zero[g] && ng != 0) frozen_ok = false;
                wact += w[g] * static_cast<double>(ng);
            }
            if (!frozen_ok) continue;
            cbar[static_cast<std::size_t>(idx)] = wact;
            wmin = std::min(wmin, wact);
            if (wact < wopt) {
                wopt = wact;
                xopt = x;
                for (int t = 0; t < b; ++t) xopt[static_cast<std::size_t>(tup[t])] = v[t];
                if (wact == 0.0) {
                    early = true;
                    break;
                }
            }
        }
        if (!early) sample_and_apply(tup, cur, theta, wmin);
        for (int t = 0; t < b; ++t) tupidx[static_cast<std::size_t>(tup[t])] = -1;
        return early;
    }

    bool vn_feasible(const std::int32_t* tup, const int* cur, const int* v) const {
        for (int t = 0; t < b; ++t) {
            const int j = tup[t] % cols;
            bool first = true;
            for (int s = 0; s < t; ++s)
                if (tup[s] % cols == j) first = false;
            if (!first) continue;  // column handled at its first tuple slot
            for (int d = 0; d < vn_stages; ++d) {
                int cnt = colcnt[static_cast<std::size_t>(j) * vn_stages + d];
                for (int s = 0; s < b; ++s) {
                    if (tup[s] % cols != j) continue;
                    cnt += (in_window(v[s], d) ? 1 : 0) - (in_window(cur[s], d) ? 1 : 0);
                }
                if (cnt < ctx.vn_min_degree) return false;
            }
        }
        return true;
    }

    void sample_and_apply(const std::int32_t* tup, const int* cur, double theta, double wmin) {
        if (!std::isfinite(wmin)) return;  // nothing feasible: keep the incumbent
        double zsum = 0.0;
        for (std::int64_t idx = 0; idx < ncomp; ++idx) {
            const double c = cbar[static_cast<std::size_t>(idx)];
            if (c < 0.0) {
                prob[static_cast<std::size_t>(idx)] = 0.0;
                continue;
            }
            const double p = std::exp(-((c - wmin) / census_w) / theta);
            prob[static_cast<std::size_t>(idx)] = p;
            zsum += p;
        }
        if (zsum <= 0.0) return;
        const double u = uniform_unit(rng) * zsum;
        double acc = 0.0;
        std::int64_t chosen = -1;
        for (std::int64_t idx = 0; idx < ncomp; ++idx) {
            const double p = prob[static_cast<std::size_t>(idx)];
            if (p <= 0.0) continue;
            acc += p;
            chosen = idx;
            if (u < acc) break;
        }
        if (chosen < 0) return;

        int v[8];
        std::int64_t remv = chosen;
        for (int t = 0; t < b; ++t) {
            v[t] = lo + static_cast<int>(remv / stride[t]);
            remv %= stride[t];
        }
        for (int t = 0; t < b; ++t) {
            const std::int32_t e = tup[t];
            const int old = cur[t];
            if (old == v[t]) continue;
            x[static_cast<std::size_t>(e)] = v[t];
            if (!lifting)
                l1 += std::labs(static_cast<long>(v[t]) - xinit[static_cast<std::size_t>(e)]) -
                      std::labs(static_cast<long>(old) - xinit[static_cast<std::size_t>(e)]);
            if (vn_stages > 0) {
                const int j = e % cols;
                for (int d = 0; d < vn_stages; ++d)
                    colcnt[static_cast<std::size_t>(j) * vn_stages + d] +=
                        (in_window(v[t], d) ? 1 : 0) - (in_window(old, d) ? 1 : 0);
            }
        }
        counts = counts_at(chosen, v);
    }

    std::array<std::int64_t, 3> counts_at(std::int64_t idx, const int* v) const {
        std::array<std::int64_t, 3> out{};
        for (int g = 0; g < 3; ++g) {
            if (cands.counts[g] == 0) continue;
            std::int64_t ng = base_cache[g] + delta[static_cast<std::size_t>(g) * ncomp + idx];
            for (int t = 0; t < b; ++t)
                ng += singles[(static_cast<std::size_t>(g) * b + t) * asize + (v[t] - lo)];
            out[g] = ng;
        }
        return out;
    }

    Mc2Result run() {
        res = Mc2Result{};
        if (total_cands == 0 || census_w <= 0.0) {
            res.c_opt = 0.0;
            res.x_opt = to_mat(x);
            res.active_opt = counts;
            return res;
        }
        tuples = build_correlation_tuples(cands, optim, b);
        ntuples = static_cast<std::int64_t>(tuples.size()) / b;
        if (ntuples == 0) {
            res.c_opt = weighted(counts) / census_w;
            res.x_opt = to_mat(x);
            res.active_opt = counts;
            return res;
        }

        xopt = x;
        wopt = census_w;
        double theta = cfg.theta0;
        std::vector<std::int64_t> perm(static_cast<std::size_t>(ntuples));
        for (std::int64_t i = 0; i < ntuples; ++i) perm[static_cast<std::size_t>(i)] = i;

        bool early = false;
        while (!early && res.transitions < cfg.max_transitions) {
            shuffle_vector(perm, rng);
            for (std::int64_t pi = 0; pi < ntuples && !early; ++pi) {
                ++res.transitions;
                early = transition_outer(perm[static_cast<std::size_t>(pi)], theta);
            }
            theta *= cfg.theta_decay;
        }

        res.x_opt = to_mat(xopt);
        res.active_opt = recount(xopt);
        if (weighted(res.active_opt) != wopt)
            throw std::logic_error("mc2: incremental bookkeeping diverged");
        res.c_opt = wopt / census_w;
        return res;
    }

    bool transition_outer(std::int64_t tuple_idx, double theta) {
        const std::int32_t* tup = tuples.data() + static_cast<std::size_t>(tuple_idx) * b;
        const bool early = transition(tup, theta);
        if (cfg.trace_stride > 0 && (early || res.transitions % cfg.trace_stride == 0))
            res.trace.push_back(
                {res.transitions, weighted(counts) / census_w, wopt / census_w});
        return early;
    }
};

}  // namespace

Mc2Result mc2_optimize(const Mc2Context& ctx, const Mc2CandidateSet& cands,
                       const Mc2Config& cfg) {
    if (cfg.max_transitions < 1) throw std::invalid_argument("mc2: max_transitions must be >= 1");
    if (!(cfg.theta0 > 0.0) || !(cfg.theta_decay > 0.0) || cfg.theta_decay > 1.0)
        throw std::invalid_argument("mc2: bad temperature schedule");
    if (cfg.chains < 1) throw std::invalid_argument("mc2: chains must be >= 1");
    if (cfg.chains == 1) {
        Chain chain(ctx, cands, cfg);
        return chain.run();
    }
    std::vector<Mc2Result> results(static_cast<std::size_t>(cfg.chains));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(cfg.chains));
    const int workers = std::max(1, std::min(cfg.threads, cfg.chains));
    std::atomic<int> next{0};
    auto body = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= cfg.chains) return;
            try {
                Mc2Config sub = cfg;
                sub.seed = cfg.seed + static_cast<std::uint64_t>(i);
                sub.chains = 1;
                Chain chain(ctx, cands, sub);
                results[static_cast<std::size_t>(i)] = chain.run();
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int t = 0; t < workers; ++t) pool.emplace_back(body);
        for (std::thread& th : pool) th.join();
    }
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);
    int best = 0;
    for (int i = 1; i < cfg.chains; ++i)
        if (results[static_cast<std::size_t>(i)].c_opt < results[static_cast<std::size_t>(best)].c_opt)
            best = i;
    return results[static_cast<std::size_t>(best)];
}

IntMat init_partition_state(const IntMat& support, const IntMat& fixed_K,
                            const IntMat& fixed_mask, int value_lo,
                            const EdgeDistribution& q, std::uint64_t seed) {
    validate_same_shape(support, fixed_K, "mc2: support/fixed shape mismatch");
    validate_same_shape(support, fixed_mask, "mc2: support/mask shape mismatch");
    if (q.weights.empty()) throw std::invalid_argument("mc2: empty distribution");
    if (q.offset != value_lo) throw std::invalid_argument("mc2: distribution offset mismatch");
    if (std::fabs(q.sum() - 1.0) > 1e-9) throw std::invalid_argument("mc2: distribution must sum to 1");

    IntMat K(support.rows, support.cols, -1);
    std::vector<std::int32_t> slots;
    const int n = support.rows * support.cols;
    for (int e = 0; e < n; ++e) {
        if (fixed_mask.v[static_cast<std::size_t>(e)] != 0) {
            K.v[static_cast<std::size_t>(e)] = fixed_K.v[static_cast<std::size_t>(e)];
        } else if (support.v[static_cast<std::size_t>(e)] != 0) {
            slots.push_back(e);
        }
    }
    const int total = static_cast<int>(slots.size());
    const int m = q.size();
    if (m > total) throw std::invalid_argument("mc2: more components than optimizable entries");

    // largest-remainder apportionment of `total` entries to the components
    std::vector<int> count(static_cast<std::size_t>(m), 0);
    std::vector<std::pair<double, int>> frac;
    int assigned = 0;
    for (int k = 0; k < m; ++k) {
        const double exact = q.weights[static_cast<std::size_t>(k)] * total;
        count[static_cast<std::size_t>(k)] = static_cast<int>(std::floor(exact));
        assigned += count[static_cast<std::size_t>(k)];
        frac.push_back({exact - std::floor(exact), k});
    }
    std::stable_sort(frac.begin(), frac.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (int r = 0; r < total - assigned; ++r) ++count[static_cast<std::size_t>(frac[static_cast<std::size_t>(r)].second)];

    std::mt19937_64 rng = make_engine(derive_key(seed, 0x706172ULL));
    shuffle_vector(slots, rng);
    std::size_t pos = 0;
    for (int k = 0; k < m; ++k)
        for (int c = 0; c < count[static_cast<std::size_t>(k)]; ++c)
            K.v[static_cast<std::size_t>(slots[pos++])] = value_lo + k;
    return K;
}

LiftInit init_lift_state(const IntMat& K, const IntMat& fixed_T, const IntMat& fixed_mask,
                         int z, std::uint64_t seed, std::int64_t attempt_budget) {
    validate_same_shape(K, fixed_T, "mc2: K/T shape mismatch");
    validate_same_shape(K, fixed_mask, "mc2: K/mask shape mismatch");
    if (z < 1) throw std::invalid_argument("mc2: z must be >= 1");

    LiftInit out;
    out.T = IntMat(K.rows, K.cols, -1);
    const int n = K.rows * K.cols;
    std::vector<std::int32_t> optim;
    std::mt19937_64 rng = make_engine(derive_key(seed, 0x6c696674ULL));
    for (int e = 0; e < n; ++e) {
        if (fixed_mask.v[static_cast<std::size_t>(e)] != 0) {
            out.T.v[static_cast<std::size_t>(e)] = fixed_T.v[static_cast<std::size_t>(e)];
        } else if (K.v[static_cast<std::size_t>(e)] >= 0) {
            out.T.v[static_cast<std::size_t>(e)] = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(z)));
            optim.push_back(e);
        }
    }

    const Mc2CandidateSet c4 = collect_mc2_candidates(K.support(), {true, false, false}, &K);
    const std::vector<std::int32_t>& ent = c4.entries[0];
    const std::int64_t nc = c4.counts[0];

    auto alt_of = [&](std::int64_t ci) {
        std::int64_t alt = 0;
        for (int s = 0; s < 4; ++s) {
            const std::int64_t v = out.T.v[static_cast<std::size_t>(ent[static_cast<std::size_t>(ci) * 4 + s])];
            alt += (s & 1) ? -v : v;
        }
        return alt;
    };
    auto total_active = [&]() {
        std::int64_t a = 0;
        for (std::int64_t ci = 0; ci < nc; ++ci) a += mod_norm(alt_of(ci), z) == 0 ? 1 : 0;
        return a;
    };

    std::int64_t active = total_active();
    if (nc == 0 || optim.empty() || z == 1) {
        out.residual_c4 = active;
        return out;
    }

    // entry -> incident cycle-4 candidates
    std::vector<std::vector<std::int32_t>> inc(static_cast<std::size_t>(n));
    for (std::int64_t ci = 0; ci < nc; ++ci)
        for (int s = 0; s < 4; ++s)
            inc[static_cast<std::size_t>(ent[static_cast<std::size_t>(ci) * 4 + s])].push_back(
                static_cast<std::int32_t>(ci));

    std::vector<std::int64_t> hist(static_cast<std::size_t>(z));
    std::vector<int> argmin;
    while (active > 0 && out.attempts < attempt_budget) {
        shuffle_vector(optim, rng);
        const std::int64_t before = active;
        for (std::int32_t e : optim) {
            if (active == 0 || out.attempts >= attempt_budget) break;
            ++out.attempts;
            std::fill(hist.begin(), hist.end(), 0);
            for (std::int32_t ci : inc[static_cast<std::size_t>(e)]) {
                // activating value of entry e for this candidate
                const std::int32_t* ce = ent.data() + static_cast<std::size_t>(ci) * 4;
                std::int64_t rest = 0;
                int st = 0;
                for (int s = 0; s < 4; ++s) {
                    const int sign = (s & 1) ? -1 : 1;
                    if (ce[s] == e) {
                        st += sign;
                    } else {
                        rest += sign * static_cast<std::int64_t>(out.T.v[static_cast<std::size_t>(ce[s])]);
                    }
                }
                if (st == 0) {  // e appears twice with cancelling signs: value-independent
                    if (mod_norm(rest, z) == 0)
                        for (std::int64_t& h : hist) ++h;
                    continue;
                }
                ++hist[static_cast<std::size_t>(mod_norm(-static_cast<std::int64_t>(st) * rest, z))];
            }
            std::int64_t best = hist[0];
            for (int v = 1; v < z; ++v) best = std::min(best, hist[static_cast<std::size_t>(v)]);
            argmin.clear();
            for (int v = 0; v < z; ++v)
                if (hist[static_cast<std::size_t>(v)] == best) argmin.push_back(v);
            const int pick = argmin[static_cast<std::size_t>(uniform_below(rng, argmin.size()))];
            const int old = out.T.v[static_cast<std::size_t>(e)];
            if (pick != old) {
                active += best - hist[static_cast<std::size_t>(old)];
                out.T.v[static_cast<std::size_t>(e)] = pick;
            }
        }
        if (active == before && active > 0) {
            // greedy plateau: kick a random entry of a random active candidate
            std::vector<std::int64_t> act;
            for (std::int64_t ci = 0; ci < nc; ++ci)
                if (mod_norm(alt_of(ci), z) == 0) act.push_back(ci);
            if (act.empty()) break;
            const std::int64_t ci = act[static_cast<std::size_t>(uniform_below(rng, act.size()))];
            std::vector<std::int32_t> movable;
            for (int s = 0; s < 4; ++s) {
                const std::int32_t e = ent[static_cast<std::size_t>(ci) * 4 + s];
                if (fixed_mask.v[static_cast<std::size_t>(e)] == 0) movable.push_back(e);
            }
            if (movable.empty()) break;  // candidate fully fixed: unremovable
            const std::int32_t e = movable[static_cast<std::size_t>(uniform_below(rng, movable.size()))];
            out.T.v[static_cast<std::size_t>(e)] = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(z)));
            ++out.attempts;
            active = total_active();
        }
    }
    out.residual_c4 = active;
    return out;
}

namespace {

// Swaps values between columns until every column meets the per-stage degree
// floor; value multiset (and thus the distribution) is preserved.
void repair_column_degrees(IntMat& K, const std::vector<int>& memories, int min_degree,
                           std::mt19937_64& rng) {
    const int rows = K.rows, cols = K.cols;
    auto cnt = [&](int j, int m) {
        int c = 0;
        for (int i = 0; i < rows; ++i) {
            const int v = K.at(i, j);
            if (v >= 0 && v <= m) ++c;
        }
        return c;
    };
    for (int guard = 0; guard < 100000; ++guard) {
        int bad_j = -1, bad_d = -1;
        for (std::size_t d = 0; d < memories.size() && bad_j < 0; ++d)
            for (int j = 0; j < cols; ++j)
                if (cnt(j, memories[d]) < min_degree) {
                    bad_j = j;
                    bad_d = static_cast<int>(d);
                    break;
                }
        if (bad_j < 0) return;
        const int m = memories[static_cast<std::size_t>(bad_d)];
        std::vector<int> high;  // rows of bad_j holding a value above the window
        for (int i = 0; i < rows; ++i)
            if (K.at(i, bad_j) > m) high.push_back(i);
        if (high.empty()) break;
        const int i0 = high[static_cast<std::size_t>(uniform_below(rng, high.size()))];
        const int a = K.at(i0, bad_j);
        std::vector<std::pair<int, int>> donors;
        for (int j = 0; j < cols; ++j) {
            if (j == bad_j) continue;
            for (int i = 0; i < rows; ++i) {
                const int v2 = K.at(i, j);
                if (v2 < 0 || v2 > m) continue;
                bool ok = true;
                for (int mem : memories) {
                    const int delta = (a <= mem ? 1 : 0) - (v2 <= mem ? 1 : 0);
                    if (cnt(j, mem) + delta < min_degree) {
                        ok = false;
                        break;
                    }
                }
                if (ok) donors.push_back({i, j});
            }
        }
        if (donors.empty()) break;
        const auto [i1, j1] = donors[static_cast<std::size_t>(uniform_below(rng, donors.size()))];
        const int v2 = K.at(i1, j1);
        K.at(i0, bad_j) = v2;
        K.at(i1, j1) = a;
    }
    for (int m : memories)
        for (int j = 0; j < cols; ++j)
            if (cnt(j, m) < min_degree)
                throw std::runtime_error("mc2: column-degree floor unsatisfiable for this schedule");
}

}  // namespace

KStarResult design_reference_K_star(const DesignPlan& plan, const EdgeDistribution& p_star,
                                    const Mc2Config& cfg) {
    DesignPlan work = plan;
    work.finalize();
    const int m_s = work.total_memory();
    if (p_star.offset != 0 || p_star.size() != m_s + 1)
        throw std::invalid_argument("mc2: reference distribution must span 0..total memory");

    const IntMat support = IntMat::ones(work.gamma, work.kappa);
    const IntMat none(work.gamma, work.kappa, -1);
    const IntMat mask(work.gamma, work.kappa, 0);
    IntMat x0 = init_partition_state(support, none, mask, 0, p_star, cfg.seed);

    std::vector<int> memories;
    for (const StageSpec& st : work.stages) memories.push_back(st.memory());
    std::mt19937_64 rng = make_engine(derive_key(cfg.seed, 0x7265706bULL));
    repair_column_degrees(x0, memories, 3, rng);

    Mc2Context ctx;
    ctx.x_init = x0;
    ctx.fixed_mask = mask;
    ctx.value_lo = 0;
    ctx.value_hi = m_s;
    ctx.modulus = 0;
    ctx.vn_memories = memories;
    ctx.vn_min_degree = 3;

    std::array<bool, 3> want{};
    for (int g = 0; g < 3; ++g) want[static_cast<std::size_t>(g)] = cfg.weights.at(g + 2) > 0.0 || cfg.frozen_zero[static_cast<std::size_t>(g)];
    const Mc2CandidateSet cands = collect_mc2_candidates(support, want);

    KStarResult out;
    out.chain = mc2_optimize(ctx, cands, cfg);
    out.K = out.chain.x_opt;
    return out;
}

std::pair<IntMat, IntMat> derive_stage_base(const IntMat& k_star, int m_fixed, int m_new,
                                            int stage_index) {
    IntMat h_n(k_star.rows, k_star.cols, 0);
    IntMat h_f(k_star.rows, k_star.cols, 0);
    for (std::size_t e = 0; e < k_star.v.size(); ++e) {
        const int v = k_star.v[e];
        if (v < 0) continue;
        if (stage_index == 0) {
            if (v < m_new + 1) h_n.v[e] = 1;
        } else {
            if (v > m_fixed && v < m_fixed + m_new + 1) h_n.v[e] = 1;
            if (v <= m_fixed) h_f.v[e] = 1;
        }
    }
    return {h_n, h_f};
}

StageMatrices derive_sf_baseline(const IntMat& k_star, const IntMat& t_star, int memory) {
    validate_same_shape(k_star, t_star, "mc2: K*/T* shape mismatch");
    StageMatrices out;
    out.K = IntMat(k_star.rows, k_star.cols, -1);
    out.T = IntMat(k_star.rows, k_star.cols, -1);
    out.fixed_mask = IntMat(k_star.rows, k_star.cols, 0);
    for (std::size_t e = 0; e < k_star.v.size(); ++e) {
        if (k_star.v[e] >= 0 && k_star.v[e] < memory + 1) {
            out.K.v[e] = k_star.v[e];
            out.T.v[e] = t_star.v[e];
            out.fixed_mask.v[e] = 1;
        }
    }
    return out;
}

LiftOutcome run_staged_lifting(const IntMat& K, const IntMat& fixed_T, const IntMat& fixed_mask,
                               int z, const Mc2Config& cfg, std::int64_t t6, std::int64_t t8) {
    LiftOutcome out;
    out.active = {-1, -1, -1};
    LiftInit li = init_lift_state(K, fixed_T, fixed_mask, z, cfg.seed);
    out.init_attempts = li.attempts;
    out.T = li.T;

    const IntMat support = K.support();
    Mc2Context ctx;
    ctx.fixed_mask = fixed_mask;
    ctx.value_lo = 0;
    ctx.value_hi = z - 1;
    ctx.modulus = z;

    if (li.residual_c4 > 0) {
        // greedy start failed; spend the cycle-6 budget on a cycle-4 chain
        const Mc2CandidateSet c4 = collect_mc2_candidates(support, {true, false, false}, &K);
        Mc2Config sub = cfg;
        sub.weights = {1.0, 0.0, 0.0};
        sub.frozen_zero = {false, false, false};
        sub.max_transitions = std::max<std::int64_t>(t6, 1);
        sub.seed = derive_key(cfg.seed, 1);
        ctx.x_init = out.T;
        const Mc2Result r4 = mc2_optimize(ctx, c4, sub);
        out.T = r4.x_opt;
        if (r4.active_opt[0] > 0) {
            out.active[0] = r4.active_opt[0];
            return out;  // cycle-4 candidates survive: caller may enlarge z
        }
    }
    out.cycle4_cleared = true;

    const Mc2CandidateSet c46 = collect_mc2_candidates(support, {true, true, false}, &K);
    {
        Mc2Config sub = cfg;
        sub.weights = {0.0, 1.0, 0.0};
        sub.frozen_zero = {true, false, false};
        sub.max_transitions = std::max<std::int64_t>(t6, 1);
        sub.seed = derive_key(cfg.seed, 2);
        ctx.x_init = out.T;
        out.chain6 = mc2_optimize(ctx, c46, sub);
        out.T = out.chain6.x_opt;
        out.active[0] = out.chain6.active_opt[0];
        out.active[1] = out.chain6.active_opt[1];
    }
    out.cycle6_cleared = out.active[1] == 0;

    if (t8 > 0 && out.cycle6_cleared) {
        const Mc2CandidateSet c468 = collect_mc2_candidates(support, {true, true, true}, &K);
        Mc2Config sub = cfg;
        sub.weights = {0.0, 0.0, 1.0};
        sub.frozen_zero = {true, true, false};
        sub.max_transitions = t8;
        sub.seed = derive_key(cfg.seed, 3);
        ctx.x_init = out.T;
        out.chain8 = mc2_optimize(ctx, c468, sub);
        out.T = out.chain8.x_opt;
        out.active = out.chain8.active_opt;
    }
    return out;
}

}  // namespace rmc
