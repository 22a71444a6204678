#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "ftr/errors.hpp"
#include "ftr/index.hpp"
#include "ftr/rational.hpp"

namespace ftr {

// Sparse element of Hom(Sym^n V, V): one output index, a multiset of n input
// indices. Keys store the inputs sorted, so lookups are invariant under any
// permutation of the inputs. No zero entries are kept.
template <class S>
struct MultiTensor {
    struct Key {
        Loop out;
        Multi in;
        auto operator<=>(const Key&) const = default;
    };

    int arity = 0;
    std::map<Key, S> vals;

    MultiTensor() = default;
    explicit MultiTensor(int n) : arity(n) {}

    static Multi sorted(Multi in) {
        std::sort(in.begin(), in.end());
        return in;
    }

    void add(const Loop& out, Multi in, const S& v) {
        if (static_cast<int>(in.size()) != arity) throw ValidationError("tensor arity mismatch");
        if (is_zero(v)) return;
        std::sort(in.begin(), in.end());
        auto [it, fresh] = vals.try_emplace(Key{out, std::move(in)}, v);
        if (!fresh) {
            it->second += v;
            if (is_zero(it->second)) vals.erase(it);
        }
    }

    void set(const Loop& out, Multi in, const S& v) {
        if (static_cast<int>(in.size()) != arity) throw ValidationError("tensor arity mismatch");
        std::sort(in.begin(), in.end());
        if (is_zero(v))
            vals.erase(Key{out, std::move(in)});
        else
            vals.insert_or_assign(Key{out, std::move(in)}, v);
    }

    S at(const Loop& out, Multi in) const {
        std::sort(in.begin(), in.end());
        auto it = vals.find(Key{out, std::move(in)});
        return it == vals.end() ? S{} : it->second;
    }

    bool operator==(const MultiTensor&) const = default;

    // All entries with the given output, as (inputs, value).
    std::vector<std::pair<Multi, const S*>> row(const Loop& out) const {
        std::vector<std::pair<Multi, const S*>> r;
        for (auto it = vals.lower_bound(Key{out, {}}); it != vals.end() && it->first.out == out; ++it)
            r.push_back({it->first.in, &it->second});
        return r;
    }
};

// Ordered bilinear map Hom(V (x) V, V); the two inputs are not interchangeable
// (this is the B tensor of an F-Airy structure).
template <class S>
struct BiMap {
    // key: (out, in0, in1)
    std::map<std::tuple<Loop, Loop, Loop>, S> vals;

    void add(const Loop& out, const Loop& in0, const Loop& in1, const S& v) {
        if (is_zero(v)) return;
        auto [it, fresh] = vals.try_emplace({out, in0, in1}, v);
        if (!fresh) {
            it->second += v;
            if (is_zero(it->second)) vals.erase(it);
        }
    }

    S at(const Loop& out, const Loop& in0, const Loop& in1) const {
        auto it = vals.find({out, in0, in1});
        return it == vals.end() ? S{} : it->second;
    }

    bool operator==(const BiMap&) const = default;

    // Entries with fixed (out, in0): pairs (in1, value).
    template <class F>
    void scan(const Loop& out, const Loop& in0, F&& f) const {
        for (auto it = vals.lower_bound({out, in0, Loop{INT32_MIN, INT32_MIN}});
             it != vals.end() && std::get<0>(it->first) == out && std::get<1>(it->first) == in0; ++it)
            f(std::get<2>(it->first), it->second);
    }
};

// Co-bilinear map Hom(V, V (x) V): one input, an ordered pair of outputs
// (the Cconn tensor; its second output is the index traced in the recursion).
template <class S>
struct CoMap {
    // key: (out0, out1, in)
    std::map<std::tuple<Loop, Loop, Loop>, S> vals;

    void add(const Loop& out0, const Loop& out1, const Loop& in, const S& v) {
        if (is_zero(v)) return;
        auto [it, fresh] = vals.try_emplace({out0, out1, in}, v);
        if (!fresh) {
            it->second += v;
            if (is_zero(it->second)) vals.erase(it);
        }
    }

    S at(const Loop& out0, const Loop& out1, const Loop& in) const {
        auto it = vals.find({out0, out1, in});
        return it == vals.end() ? S{} : it->second;
    }

    bool operator==(const CoMap&) const = default;

    // Entries with fixed out0: f(out1, in, value).
    template <class F>
    void scan(const Loop& out0, F&& f) const {
        for (auto it = vals.lower_bound({out0, Loop{INT32_MIN, INT32_MIN}, Loop{INT32_MIN, INT32_MIN}});
             it != vals.end() && std::get<0>(it->first) == out0; ++it)
            f(std::get<1>(it->first), std::get<2>(it->first), it->second);
    }
};

// Sparse linear map on the loop space, key (out, in).
template <class S>
struct LinMap {
    std::map<std::pair<Loop, Loop>, S> vals;

    void add(const Loop& out, const Loop& in, const S& v) {
        if (is_zero(v)) return;
        auto [it, fresh] = vals.try_emplace({out, in}, v);
        if (!fresh) {
            it->second += v;
            if (is_zero(it->second)) vals.erase(it);
        }
    }

    S at(const Loop& out, const Loop& in) const {
        auto it = vals.find({out, in});
        return it == vals.end() ? S{} : it->second;
    }

    bool operator==(const LinMap&) const = default;

    // Column scan: f(out, value) over entries with the given input.
    template <class F>
    void scan_in(const Loop& in, F&& f) const {
        for (const auto& [k, v] : vals)
            if (k.second == in) f(k.first, v);
    }

    // Row scan: f(in, value) over entries with the given output.
    template <class F>
    void scan_out(const Loop& out, F&& f) const {
        for (auto it = vals.lower_bound({out, Loop{INT32_MIN, INT32_MIN}});
             it != vals.end() && it->first.first == out; ++it)
            f(it->first.second, it->second);
    }

    std::map<Loop, S> apply(const std::map<Loop, S>& x) const {
        std::map<Loop, S> y;
        for (const auto& [k, v] : vals) {
            auto it = x.find(k.second);
            if (it == x.end()) continue;
            S t = v * it->second;
            if (is_zero(t)) continue;
            auto [jt, fresh] = y.try_emplace(k.first, t);
            if (!fresh) {
                jt->second += t;
                if (is_zero(jt->second)) y.erase(jt);
            }
        }
        return y;
    }
};

LinMap<Rat> compose(const LinMap<Rat>& f, const LinMap<Rat>& g); // f after g
LinMap<Rat> identity_map(const std::vector<Loop>& universe);
// Exact inverse over the given index universe; throws ValidationError when singular.
LinMap<Rat> invert(const LinMap<Rat>& f, const std::vector<Loop>& universe);

} // namespace ftr
