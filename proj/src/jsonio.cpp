#include "ftr/jsonio.hpp"

#include <sstream>

namespace ftr {

namespace {

Json loop_json(const Loop& l) { return Json::array({l.a, l.k}); }

Loop loop_from(const Json& j) {
    if (!j.is_array() || j.size() != 2) throw ParseError("loop index must be [alpha, k]");
    return {j[0].get<int>(), j[1].get<int>()};
}

Rat rat_from(const Json& j) {
    if (!j.is_string()) throw ParseError("rational must be a string");
    return Rat::parse(j.get<std::string>());
}

std::string label(const Loop& l, bool one_based) {
    return "(" + std::to_string(l.a + (one_based ? 1 : 0)) + "," + std::to_string(l.k) + ")";
}

} // namespace

Json tensor_to_json(const MultiTensor<Rat>& t) {
    Json arr = Json::array();
    for (const auto& [k, v] : t.vals) {
        Json in = Json::array();
        for (const auto& i : k.in) in.push_back(loop_json(i));
        arr.push_back({{"out", loop_json(k.out)}, {"in", in}, {"value", v.str()}});
    }
    return arr;
}

Json seed_to_json(const Seed& s) {
    Json j;
    j["dim"] = s.dim;
    j["cap"] = s.cap;
    j["dim_bounded"] = s.dim_bounded;
    j["A"] = tensor_to_json(s.A);
    Json b = Json::array();
    for (const auto& [k, v] : s.B.vals)
        b.push_back({{"out", loop_json(std::get<0>(k))},
                     {"in", Json::array({loop_json(std::get<1>(k)), loop_json(std::get<2>(k))})},
                     {"value", v.str()}});
    j["B"] = b;
    Json cc = Json::array();
    for (const auto& [k, v] : s.Cconn.vals)
        cc.push_back({{"out", Json::array({loop_json(std::get<0>(k)), loop_json(std::get<1>(k))})},
                      {"in", loop_json(std::get<2>(k))},
                      {"value", v.str()}});
    j["Cconn"] = cc;
    j["Cdisc"] = tensor_to_json(s.Cdisc);
    Json d = Json::array();
    for (const auto& [k, v] : s.D) d.push_back({{"index", loop_json(k)}, {"value", v.str()}});
    j["D"] = d;
    return j;
}

Seed seed_from_json(const Json& j) {
    try {
        Seed s;
        s.dim = j.at("dim").get<int>();
        s.cap = j.value("cap", -1);
        s.dim_bounded = j.value("dim_bounded", false);
        for (const auto& e : j.at("A")) {
            Multi in;
            for (const auto& i : e.at("in")) in.push_back(loop_from(i));
            s.A.add(loop_from(e.at("out")), in, rat_from(e.at("value")));
        }
        for (const auto& e : j.at("B"))
            s.B.add(loop_from(e.at("out")), loop_from(e.at("in")[0]), loop_from(e.at("in")[1]),
                    rat_from(e.at("value")));
        for (const auto& e : j.at("Cconn"))
            s.Cconn.add(loop_from(e.at("out")[0]), loop_from(e.at("out")[1]), loop_from(e.at("in")),
                        rat_from(e.at("value")));
        for (const auto& e : j.at("Cdisc")) {
            Multi in;
            for (const auto& i : e.at("in")) in.push_back(loop_from(i));
            s.Cdisc.add(loop_from(e.at("out")), in, rat_from(e.at("value")));
        }
        for (const auto& e : j.at("D")) s.D[loop_from(e.at("index"))] = rat_from(e.at("value"));
        return s;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("bad seed file: ") + e.what());
    }
}

Json curve_to_json(const LocalCurve& c) {
    Json j;
    Json pts = Json::array();
    for (int a = 0; a < c.npts; ++a) {
        Json y;
        for (const auto& [e, v] : c.y_odd[a]) y[std::to_string(e)] = v.str();
        pts.push_back({{"weight", c.w[a].str()}, {"y_series", y}});
    }
    j["points"] = pts;
    auto block = [](const decltype(c.conn_block)& b) {
        Json arr = Json::array();
        for (const auto& [k, v] : b)
            arr.push_back({{"slot1", Json::array({k.first.first, k.first.second})},
                           {"slot2", Json::array({k.second.first, k.second.second})},
                           {"value", v.str()}});
        return arr;
    };
    j["omega_conn_block"] = block(c.conn_block);
    j["omega_disc_block"] = block(c.disc_block);
    j["order"] = c.order;
    return j;
}

LocalCurve curve_from_json(const Json& j) {
    try {
        LocalCurve c;
        c.npts = static_cast<int>(j.at("points").size());
        c.order = j.value("order", 24);
        for (const auto& p : j.at("points")) {
            c.w.push_back(rat_from(p.at("weight")));
            std::map<int, Rat> y;
            for (const auto& [e, v] : p.at("y_series").items()) y[std::stoi(e)] = rat_from(v);
            c.y_odd.push_back(std::move(y));
        }
        auto block = [&](const Json& arr) {
            std::map<std::pair<std::pair<int, int>, std::pair<int, int>>, Rat> b;
            for (const auto& e : arr)
                b[{{e.at("slot1")[0].get<int>(), e.at("slot1")[1].get<int>()},
                   {e.at("slot2")[0].get<int>(), e.at("slot2")[1].get<int>()}}] =
                    rat_from(e.at("value"));
            return b;
        };
        c.conn_block = block(j.value("omega_conn_block", Json::array()));
        c.disc_block = block(j.value("omega_disc_block", Json::array()));
        c.validate();
        return c;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("bad curve file: ") + e.what());
    }
}

Json linmap_to_json(const LinMap<Rat>& m) {
    Json arr = Json::array();
    for (const auto& [k, v] : m.vals)
        arr.push_back({{"out", loop_json(k.first)}, {"in", loop_json(k.second)}, {"value", v.str()}});
    return arr;
}

LinMap<Rat> linmap_from_json(const Json& j) {
    try {
        LinMap<Rat> m;
        for (const auto& e : j) m.add(loop_from(e.at("out")), loop_from(e.at("in")), rat_from(e.at("value")));
        return m;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("bad linear map file: ") + e.what());
    }
}

Json correlator_rows_json(const std::map<CorrelatorKey, Rat>& rows, bool one_based) {
    Json arr = Json::array();
    for (const auto& [k, v] : rows) {
        Json e;
        e["g"] = k.g;
        e["out"] = label(k.out, one_based);
        if (!k.ins.empty()) {
            Json in = Json::array();
            for (const auto& i : k.ins) in.push_back(label(i, one_based));
            e["in"] = in;
        }
        e["value"] = v.str();
        arr.push_back(std::move(e));
    }
    return arr;
}

std::string correlator_rows_csv(const std::map<CorrelatorKey, Rat>& rows, bool one_based) {
    std::ostringstream os;
    os << "g,out,in,value\n";
    for (const auto& [k, v] : rows) {
        os << k.g << "," << label(k.out, one_based) << ",\"";
        for (size_t i = 0; i < k.ins.size(); ++i) os << (i ? " " : "") << label(k.ins[i], one_based);
        os << "\"," << v.str() << "\n";
    }
    return os.str();
}

} // namespace ftr
