#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "json.hpp"

#include "descentlab/complexes/complex.hpp"
#include "descentlab/descent/presheaf.hpp"
#include "descentlab/descent/simplicial.hpp"
#include "descentlab/operad/cdga.hpp"

namespace descentlab::io {

using Json = nlohmann::ordered_json;

template <class S>
using RingOf = ring_of<S>;

// ---------------------------------------------------------------- coefficients

inline Json ring_to_json(const RationalField&) { return "Q"; }
inline Json ring_to_json(const NovikovRing& R)
{
    Json j;
    j["novikov"]["den"] = R.den;
    j["novikov"]["cutoff"] = R.cutoff.to_string();
    return j;
}

inline Rational rational_from_json(const Json& j)
{
    if (j.is_number_integer())
        return Rational(j.get<long>());
    if (j.is_string())
        return Rational::parse(j.get<std::string>());
    throw InputError("expected a rational as an integer or a string, got " + j.dump());
}

using AnyRing = std::variant<RationalField, NovikovRing>;

inline AnyRing ring_from_json(const Json& j)
{
    if (j.is_string() && j.get<std::string>() == "Q")
        return RationalField{};
    if (j.is_object() && j.contains("novikov")) {
        const auto& n = j.at("novikov");
        if (!n.contains("den") || !n.at("den").is_number_integer())
            throw InputError("novikov coefficients need an integer 'den'");
        const int den = n.at("den").get<int>();
        if (den < 1)
            throw InputError("novikov 'den' must be positive");
        if (!n.contains("cutoff"))
            throw InputError("novikov coefficients need a 'cutoff'");
        return NovikovRing(den, rational_from_json(n.at("cutoff")));
    }
    throw InputError("unknown coefficient ring " + j.dump());
}

template <class S>
Json scalar_to_json(const S& s)
{
    return scalar_traits<S>::to_string(s);
}

template <class S>
S scalar_from_json(const RingOf<S>& R, const Json& j)
{
    if (j.is_number_integer())
        return scalar_traits<S>::from_rational(R, Rational(j.get<long>()));
    if (j.is_string())
        return scalar_traits<S>::parse(R, j.get<std::string>());
    throw InputError("expected a scalar as an integer or a string, got " + j.dump());
}

// ---------------------------------------------------------------- matrices

template <class S>
Json matrix_to_json(const SparseMatrix<S>& m)
{
    Json arr = Json::array();
    for (const auto& t : m.triplets())
        arr.push_back(Json::array({t.row, t.col, scalar_to_json(t.value)}));
    return arr;
}

template <class S>
SparseMatrix<S> matrix_from_json(const RingOf<S>& R, int rows, int cols, const Json& j, const std::string& where)
{
    if (!j.is_array())
        throw InputError(where + ": expected a list of [row, col, scalar] entries");
    std::vector<Triplet<S>> t;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number_integer())
            throw InputError(where + ": bad entry " + e.dump());
        const int r = e[0].get<int>(), c = e[1].get<int>();
        if (r < 0 || r >= rows || c < 0 || c >= cols)
            throw InputError(where + ": entry " + e.dump() + " outside a " + std::to_string(rows) + "x" +
                             std::to_string(cols) + " matrix");
        t.push_back({r, c, scalar_from_json<S>(R, e[2])});
    }
    return SparseMatrix<S>::from_triplets(R, rows, cols, std::move(t));
}

// ---------------------------------------------------------------- complexes

template <class S>
Json complex_to_json(const Complex<S>& c)
{
    Json j;
    j["coeff"] = ring_to_json(c.ring());
    j["support"] = Json::array({c.lo(), c.hi()});
    Json dims = Json::object(), diff = Json::object();
    for (int n = c.lo(); n <= c.hi(); ++n) {
        dims[std::to_string(n)] = c.dim(n);
        if (n < c.hi() && !c.d(n).is_zero())
            diff[std::to_string(n)] = matrix_to_json(c.d(n));
    }
    j["dims"] = dims;
    j["diff"] = diff;
    return j;
}

inline int degree_key(const std::string& k, const std::string& where)
{
    try {
        size_t used = 0;
        const int n = std::stoi(k, &used);
        if (used != k.size())
            throw std::invalid_argument(k);
        return n;
    } catch (const std::exception&) {
        throw InputError(where + ": degree key '" + k + "' is not an integer");
    }
}

template <class S>
Complex<S> complex_from_json(const RingOf<S>& R, const Json& j, const std::string& where = "complex")
{
    if (!j.is_object())
        throw InputError(where + ": expected an object");
    if (!j.contains("support") || !j.at("support").is_array() || j.at("support").size() != 2)
        throw InputError(where + ": 'support' must be [lo, hi]");
    const int lo = j.at("support")[0].get<int>(), hi = j.at("support")[1].get<int>();
    if (hi < lo - 1)
        throw InputError(where + ": empty support must be written [lo, lo-1]");
    std::vector<int> dims(hi - lo + 1, 0);
    if (j.contains("dims")) {
        for (const auto& [k, v] : j.at("dims").items()) {
            const int n = degree_key(k, where);
            if (n < lo || n > hi)
                throw InputError(where + ": dimension in degree " + k + " outside the support");
            if (!v.is_number_integer() || v.template get<int>() < 0)
                throw InputError(where + ": bad dimension in degree " + k);
            dims[n - lo] = v.template get<int>();
        }
    }
    Complex<S> c(R, lo, dims);
    if (j.contains("diff"))
        for (const auto& [k, v] : j.at("diff").items()) {
            const int n = degree_key(k, where);
            c.set_d(n, matrix_from_json<S>(R, c.dim(n + 1), c.dim(n), v, where + " d^" + k));
        }
    return c;
}

template <class S>
Json map_to_json(const ChainMap<S>& f)
{
    Json j;
    if (f.shift() != 0)
        j["shift"] = f.shift();
    Json maps = Json::object();
    for (int n = f.source().lo(); n <= f.source().hi(); ++n)
        if (!f.at(n).is_zero())
            maps[std::to_string(n)] = matrix_to_json(f.at(n));
    j["maps"] = maps;
    return j;
}

template <class S>
ChainMap<S> map_from_json(const Complex<S>& source, const Complex<S>& target, const Json& j,
                          const std::string& where = "map")
{
    if (!j.is_object())
        throw InputError(where + ": expected an object");
    const int shift = j.contains("shift") ? j.at("shift").get<int>() : 0;
    ChainMap<S> f(source, target, shift);
    if (j.contains("maps"))
        for (const auto& [k, v] : j.at("maps").items()) {
            const int n = degree_key(k, where);
            f.set(n, matrix_from_json<S>(source.ring(), target.dim(n + shift), source.dim(n), v, where + " f^" + k));
        }
    return f;
}

// ---------------------------------------------------------------- presheaves

inline NodeMask node_from_string(const std::string& s, int N)
{
    if (s == "top")
        return 0;
    Json list;
    try {
        list = Json::parse(s);
    } catch (const Json::exception&) {
        throw InputError("bad node '" + s + "'");
    }
    if (!list.is_array() || list.empty())
        throw InputError("bad node '" + s + "'");
    NodeMask J = 0;
    for (const auto& m : list) {
        if (!m.is_number_integer() || m.get<int>() < 1 || m.get<int>() > N)
            throw InputError("node '" + s + "' has a member outside 1.." + std::to_string(N));
        J |= NodeMask(1) << (m.get<int>() - 1);
    }
    return J;
}

template <class S>
Json presheaf_to_json(const CoverPresheaf<S>& F)
{
    Json j;
    j["kind"] = "presheaf";
    j["N"] = F.N();
    j["coeff"] = ring_to_json(F.ring());
    Json values = Json::object();
    for (const auto& [J, c] : F.values())
        values[node_string(J)] = complex_to_json(c);
    j["values"] = values;
    Json res = Json::object();
    for (const auto& [key, f] : F.restrictions())
        res[node_string(key.first) + "->" + node_string(key.second)] = map_to_json(f);
    j["restrictions"] = res;
    return j;
}

inline std::pair<std::string, std::string> split_arrow(const std::string& key)
{
    for (const std::string arrow : {"->", "\xE2\x86\x92"}) {
        const auto pos = key.find(arrow);
        if (pos != std::string::npos)
            return {key.substr(0, pos), key.substr(pos + arrow.size())};
    }
    throw InputError("restriction key '" + key + "' needs the form from->to");
}

template <class S>
CoverPresheaf<S> presheaf_from_json(const RingOf<S>& R, const Json& j)
{
    if (!j.contains("N") || !j.at("N").is_number_integer())
        throw InputError("presheaf needs an integer 'N'");
    const int N = j.at("N").get<int>();
    CoverPresheaf<S> F(R, N);
    if (!j.contains("values") || !j.at("values").is_object())
        throw InputError("presheaf needs a 'values' object");
    for (const auto& [k, v] : j.at("values").items()) {
        const NodeMask J = node_from_string(k, N);
        Json c = v;
        if (!c.contains("coeff"))
            c["coeff"] = j.at("coeff");
        F.set_value(J, complex_from_json<S>(R, c, "value " + k));
    }
    for (NodeMask J = 0; J <= F.full(); ++J)
        if (!F.has_value(J))
            throw InputError("presheaf has no value at " + node_string(J));
    if (j.contains("restrictions"))
        for (const auto& [k, v] : j.at("restrictions").items()) {
            auto [a, b] = split_arrow(k);
            const NodeMask from = node_from_string(a, N), to = node_from_string(b, N);
            F.set_restriction(from, to, map_from_json<S>(F.value(from), F.value(to), v, "restriction " + k));
        }
    return F;
}

using AnyPresheaf = std::variant<CoverPresheaf<Rational>, CoverPresheaf<NovikovElem>>;

inline AnyPresheaf any_presheaf_from_json(const Json& j)
{
    if (!j.contains("coeff"))
        throw InputError("presheaf needs a 'coeff'");
    const AnyRing R = ring_from_json(j.at("coeff"));
    if (std::holds_alternative<RationalField>(R))
        return presheaf_from_json<Rational>(std::get<RationalField>(R), j);
    return presheaf_from_json<NovikovElem>(std::get<NovikovRing>(R), j);
}

using AnyComplex = std::variant<Complex<Rational>, Complex<NovikovElem>>;

inline AnyComplex any_complex_from_json(const Json& j)
{
    if (!j.is_object() || !j.contains("coeff"))
        throw InputError("complex needs a 'coeff'");
    const AnyRing R = ring_from_json(j.at("coeff"));
    if (std::holds_alternative<RationalField>(R))
        return complex_from_json<Rational>(std::get<RationalField>(R), j);
    return complex_from_json<NovikovElem>(std::get<NovikovRing>(R), j);
}

// ---------------------------------------------------------------- algebra structure

/// Presheaf JSON plus "units" per node and "products" per node as [a, i, b, j, [[k, c], ..]] for
/// every nonzero product of basis elements e^a_i e^b_j.
inline Json cdga_to_json(const CDGAPresheaf& A)
{
    Json j = presheaf_to_json(A.F);
    j["kind"] = "cdga-presheaf";
    j["name"] = A.name;
    j["graded_commutative"] = A.graded_commutative;
    Json units = Json::object(), products = Json::object(), outside = Json::object();
    for (NodeMask J = 0; J <= A.F.full(); ++J) {
        const auto& C = A.F.value(J);
        Json u = Json::array();
        for (const auto& [k, c] : A.units.at(J))
            u.push_back(Json::array({k, c.to_string()}));
        units[node_string(J)] = u;
        Json table = Json::array(), skipped = Json::array();
        for (int a = C.lo(); a <= C.hi(); ++a)
            for (int b = C.lo(); b <= C.hi(); ++b) {
                if (a + b > C.hi() || a + b < C.lo())
                    continue;
                for (int i = 0; i < C.dim(a); ++i)
                    for (int k = 0; k < C.dim(b); ++k) {
                        QVec v;
                        try {
                            v = A.mul(J, a, i, b, k);
                        } catch (const CutoffTooSmall&) {
                            skipped.push_back(Json::array({a, i, b, k}));
                            continue;
                        }
                        if (v.empty())
                            continue;
                        Json coeffs = Json::array();
                        for (const auto& [idx, c] : v)
                            coeffs.push_back(Json::array({idx, c.to_string()}));
                        table.push_back(Json::array({a, i, b, k, coeffs}));
                    }
            }
        products[node_string(J)] = table;
        if (!skipped.empty())
            outside[node_string(J)] = skipped;
    }
    j["units"] = units;
    j["products"] = products;
    j["outside_window"] = outside;
    return j;
}

inline QVec qvec_from_json(const Json& j, int dim, const std::string& where)
{
    if (!j.is_array())
        throw InputError(where + ": expected [[index, scalar], ..]");
    QVec v;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer())
            throw InputError(where + ": bad entry " + e.dump());
        const int k = e[0].get<int>();
        if (k < 0 || k >= dim)
            throw InputError(where + ": index " + std::to_string(k) + " out of range");
        v.emplace_back(k, rational_from_json(e[1]));
    }
    std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    return v;
}

/// Products missing from the table are zero; those listed under "outside_window" raise CutoffTooSmall.
inline CDGAPresheaf cdga_from_json(const Json& j)
{
    CDGAPresheaf A;
    A.name = j.value("name", std::string("input"));
    A.graded_commutative = j.value("graded_commutative", true);
    if (!(ring_from_json(j.at("coeff")).index() == 0))
        throw UnsupportedRing("algebra presheaves are supported over Q only");
    A.F = presheaf_from_json<Rational>(RationalField{}, j);
    using Key = std::tuple<NodeMask, int, int, int, int>;
    auto table = std::make_shared<std::map<Key, QVec>>();
    auto outside = std::make_shared<std::set<Key>>();
    if (!j.contains("units") || !j.contains("products"))
        throw InputError("algebra presheaf needs 'units' and 'products'");
    for (NodeMask J = 0; J <= A.F.full(); ++J) {
        const std::string key = node_string(J);
        const auto& C = A.F.value(J);
        if (!j.at("units").contains(key))
            throw InputError("no unit at " + key);
        A.units.push_back(qvec_from_json(j.at("units").at(key), C.dim(0), "unit at " + key));
        if (!j.at("products").contains(key))
            continue;
        for (const auto& e : j.at("products").at(key)) {
            if (!e.is_array() || e.size() != 5)
                throw InputError("product entry at " + key + " must be [a, i, b, j, coeffs]");
            const int a = e[0].get<int>(), i = e[1].get<int>(), b = e[2].get<int>(), k = e[3].get<int>();
            if (i < 0 || i >= C.dim(a) || k < 0 || k >= C.dim(b))
                throw InputError("product entry " + e.dump() + " at " + key + " out of range");
            (*table)[{J, a, i, b, k}] = qvec_from_json(e[4], C.dim(a + b), "product at " + key);
        }
        if (j.contains("outside_window") && j.at("outside_window").contains(key))
            for (const auto& e : j.at("outside_window").at(key)) {
                if (!e.is_array() || e.size() != 4)
                    throw InputError("outside_window entry at " + key + " must be [a, i, b, j]");
                outside->insert({J, e[0].get<int>(), e[1].get<int>(), e[2].get<int>(), e[3].get<int>()});
            }
    }
    A.mul = [table, outside](NodeMask J, int a, int i, int b, int k) -> QVec {
        if (outside->count({J, a, i, b, k}))
            throw CutoffTooSmall("product leaves the stored window at " + node_string(J));
        auto it = table->find({J, a, i, b, k});
        return it == table->end() ? QVec{} : it->second;
    };
    return A;
}

// ---------------------------------------------------------------- simplicial covers

inline Json covered_complex_to_json(const CoveredComplex& cc)
{
    auto maximal = [](const Subcomplex& X) {
        Json arr = Json::array();
        for (const auto& s : X) {
            bool is_max = true;
            for (const auto& t : X)
                if (t.size() > s.size() && std::includes(t.begin(), t.end(), s.begin(), s.end())) {
                    is_max = false;
                    break;
                }
            if (is_max)
                arr.push_back(s);
        }
        return arr;
    };
    Json j;
    j["kind"] = "covered-complex";
    j["name"] = cc.name;
    j["maximal"] = maximal(cc.space);
    Json cov = Json::array();
    for (const auto& K : cc.cover)
        cov.push_back(maximal(K));
    j["cover"] = cov;
    return j;
}

inline Subcomplex subcomplex_from_json(const Json& j, const std::string& where)
{
    if (!j.is_array())
        throw InputError(where + ": expected a list of simplices");
    std::vector<Simplex> maximal;
    for (const auto& s : j) {
        if (!s.is_array() || s.empty())
            throw InputError(where + ": bad simplex " + s.dump());
        Simplex v;
        for (const auto& x : s) {
            if (!x.is_number_integer() || x.get<int>() < 0)
                throw InputError(where + ": vertices are non-negative integers");
            v.push_back(x.get<int>());
        }
        std::sort(v.begin(), v.end());
        if (std::adjacent_find(v.begin(), v.end()) != v.end())
            throw InputError(where + ": repeated vertex in " + s.dump());
        maximal.push_back(v);
    }
    return closure(maximal);
}

inline CoveredComplex covered_complex_from_json(const Json& j)
{
    CoveredComplex cc;
    cc.name = j.value("name", std::string("input"));
    if (!j.contains("maximal") || !j.contains("cover"))
        throw InputError("covered complex needs 'maximal' and 'cover'");
    cc.space = subcomplex_from_json(j.at("maximal"), "maximal");
    for (const auto& K : j.at("cover"))
        cc.cover.push_back(subcomplex_from_json(K, "cover member"));
    if (cc.cover.empty())
        throw InputError("empty cover");
    if (!covers(cc))
        throw InputError("the cover members are not subcomplexes whose union is the space");
    return cc;
}

// ---------------------------------------------------------------- diagrams

template <class S>
struct Diagram
{
    std::vector<Complex<S>> stages;
    std::vector<ChainMap<S>> maps;
};

template <class S>
Json diagram_to_json(const Diagram<S>& D)
{
    Json j;
    j["kind"] = "telescope";
    j["coeff"] = ring_to_json(D.stages.at(0).ring());
    Json st = Json::array(), mp = Json::array();
    for (const auto& c : D.stages)
        st.push_back(complex_to_json(c));
    for (const auto& f : D.maps)
        mp.push_back(map_to_json(f));
    j["stages"] = st;
    j["maps"] = mp;
    return j;
}

template <class S>
Diagram<S> diagram_from_json(const RingOf<S>& R, const Json& j)
{
    Diagram<S> D;
    if (!j.contains("stages") || !j.at("stages").is_array() || j.at("stages").empty())
        throw InputError("telescope needs a nonempty 'stages' list");
    for (const auto& c : j.at("stages")) {
        Json cc = c;
        if (!cc.contains("coeff"))
            cc["coeff"] = j.at("coeff");
        D.stages.push_back(complex_from_json<S>(R, cc, "stage " + std::to_string(D.stages.size())));
    }
    const Json maps = j.value("maps", Json::array());
    if (maps.size() + 1 != D.stages.size())
        throw InputError("telescope needs one map per consecutive pair of stages");
    for (size_t i = 0; i < maps.size(); ++i)
        D.maps.push_back(map_from_json<S>(D.stages[i], D.stages[i + 1], maps[i], "map " + std::to_string(i)));
    return D;
}

} // namespace descentlab::io
