#include "ftr/tick.hpp"

#include <algorithm>

namespace ftr {

void TickData::add(int k, Multi slots, const Rat& v) {
    if (k < 2) throw ValidationError("tick summands start at k = 2");
    if (static_cast<int>(slots.size()) != k) throw ValidationError("tick slot count mismatch");
    if (v.is_zero()) return;
    std::sort(slots.begin(), slots.end());
    auto& layer = sha[k];
    auto [it, fresh] = layer.try_emplace(std::move(slots), v);
    if (!fresh) {
        it->second += v;
        if (it->second.is_zero()) layer.erase(it);
    }
    if (layer.empty()) sha.erase(k);
}

TickData TickData::operator+(const TickData& o) const {
    TickData r = *this;
    for (const auto& [k, layer] : o.sha)
        for (const auto& [slots, v] : layer) r.add(k, slots, v);
    return r;
}

namespace {

struct TickInstance {
    int k;
    const Multi* slots; // sorted (label, u-power) tuple
    const Rat* value;
};

} // namespace

Rat tick_correlator(const Algebra& alg, const TickData& tick, const CorrelatorKey& key,
                    TickSide side) {
    int n = static_cast<int>(key.ins.size());
    require_stable(key.g, n);
    alg.validate();

    // flatten the available tick summands
    std::vector<TickInstance> pool;
    for (const auto& [k, layer] : tick.sha)
        for (const auto& [slots, v] : layer) pool.push_back({k, &slots, &v});

    Rat total(0);

    // multiset of tick instances as a nondecreasing index sequence; each tick
    // of size k lowers the central genus by k - 1
    std::vector<size_t> chosen;
    auto evaluate = [&]() {
        int drop = 0;
        for (size_t idx : chosen) drop += pool[idx].k - 1;
        int g0 = key.g - drop;
        if (g0 < 0) return;

        // symmetry factor of the instance multiset (ordered tuples / m!)
        Rat sym(1);
        size_t i = 0;
        while (i < chosen.size()) {
            size_t j = i;
            while (j < chosen.size() && chosen[j] == chosen[i]) ++j;
            sym *= factorial(static_cast<long>(j - i));
            i = j;
        }

        // central-vertex psi powers and algebra vectors
        std::vector<long> central_pows;
        std::vector<long> tickv_pows; // flattened per-tick genus-0 correlators
        Rat tick_witten(1);
        std::vector<Rat> acc; // algebra product accumulator
        bool started = false;
        for (int gi = 0; gi < g0; ++gi) {
            acc = started ? alg.mul(acc, alg.w) : alg.w;
            started = true;
        }
        for (const auto& in : key.ins) {
            std::vector<Rat> e(alg.dim, Rat(0));
            e[in.a] = Rat(1);
            acc = started ? alg.mul(acc, e) : e;
            started = true;
            central_pows.push_back(in.k);
        }
        for (size_t idx : chosen) {
            const auto& inst = pool[idx];
            std::vector<long> dpows;
            for (const auto& slot : *inst.slots) {
                std::vector<Rat> e(alg.dim, Rat(0));
                e[slot.a] = Rat(1);
                acc = started ? alg.mul(acc, e) : e;
                started = true;
                dpows.push_back(slot.k);
            }
            if (inst.k == 2) {
                // loop at the central vertex: both psi powers central
                central_pows.push_back(dpows[0]);
                central_pows.push_back(dpows[1]);
            } else if (side == TickSide::TickVertex) {
                for (int e = 0; e < inst.k; ++e) central_pows.push_back(0);
                Rat w0 = witten_correlator(0, dpows[0],
                                           std::vector<long>(dpows.begin() + 1, dpows.end()));
                if (w0.is_zero()) { tick_witten = Rat(0); break; }
                tick_witten *= w0;
            } else {
                for (long d : dpows) central_pows.push_back(d);
                Rat w0 = witten_correlator(0, 0, std::vector<long>(inst.k - 1, 0));
                if (w0.is_zero()) { tick_witten = Rat(0); break; }
                tick_witten *= w0;
            }
        }
        if (tick_witten.is_zero()) return;
        if (!started) return;
        if (!stable(g0, static_cast<int>(central_pows.size()))) return;
        Rat central = witten_correlator(g0, key.out.k, central_pows);
        if (central.is_zero()) return;

        Rat coeff(1);
        for (size_t idx : chosen) coeff *= *pool[idx].value;
        total += coeff / sym * tick_witten * central * acc[key.out.a];
    };

    // enumerate the instance multisets; each tick consumes at least one unit
    // of genus, so depth is bounded by g
    auto rec = [&](auto&& self, size_t start, int genus_left) -> void {
        evaluate();
        for (size_t idx = start; idx < pool.size(); ++idx) {
            if (pool[idx].k - 1 > genus_left) continue;
            chosen.push_back(idx);
            self(self, idx, genus_left - (pool[idx].k - 1));
            chosen.pop_back();
        }
    };
    rec(rec, 0, key.g);
    return total;
}

} // namespace ftr
