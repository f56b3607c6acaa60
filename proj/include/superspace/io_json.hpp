#pragma once

// JSON encodings for the library's value types.  Integers travel as decimal
// strings so arbitrary-precision values survive the round trip.

#include <json.hpp>

#include "superspace/schrodinger.hpp"

namespace superspace {

using json = nlohmann::json;

inline json to_json(const GaussianRational& z) {
    return json{{"re", z.re().to_string()}, {"im", z.im().to_string()}};
}

inline GaussianRational gaussian_rational_from_json(const json& j) {
    return GaussianRational(Rational::from_string(j.at("re").get<std::string>()),
                            Rational::from_string(j.at("im").get<std::string>()));
}

/// {"re":"p/q","im":"p/q","half_pi":h}
inline json to_json(const PiScaled& x) {
    json j = to_json(x.coeff());
    j["half_pi"] = x.half_pi_exp();
    return j;
}

inline PiScaled pi_scaled_from_json(const json& j) {
    return PiScaled(gaussian_rational_from_json(j), j.at("half_pi").get<long>());
}

/// Grassmann element: [{"mask":int,"coeff":{re,im}}]
inline json to_json(const GrassmannElement& f) {
    json terms = json::array();
    for (const auto& [mask, c] : f.terms())
        terms.push_back(json{{"mask", mask}, {"coeff", to_json(c)}});
    return json{{"n", f.n()}, {"terms", terms}};
}

inline GrassmannElement grassmann_from_json(const json& j) {
    GrassmannElement f(j.at("n").get<int>());
    for (const auto& t : j.at("terms"))
        f.add_term(t.at("mask").get<FermionicMask>(),
                   gaussian_rational_from_json(t.at("coeff")));
    return f;
}

/// {"m":m,"n":n,"terms":[{"bos":[e...],"mask":b,"re":"p/q","im":"p/q"}]}
inline json to_json(const SuperPolynomial& f) {
    json terms = json::array();
    for (const auto& [key, c] : f.terms())
        terms.push_back(json{{"bos", key.bos},
                             {"mask", key.mask},
                             {"re", c.re().to_string()},
                             {"im", c.im().to_string()}});
    return json{{"m", f.m()}, {"n", f.n()}, {"terms", terms}};
}

inline SuperPolynomial superpoly_from_json(const json& j) {
    SuperPolynomial f(j.at("m").get<int>(), j.at("n").get<int>());
    for (const auto& t : j.at("terms")) {
        TermKey key;
        key.bos = t.at("bos").get<std::vector<std::uint32_t>>();
        key.mask = t.at("mask").get<FermionicMask>();
        f.add_term(std::move(key),
                   GaussianRational(Rational::from_string(t.at("re").get<std::string>()),
                                    Rational::from_string(t.at("im").get<std::string>())));
    }
    return f;
}

/// {"m":m,"n":n,"coeffs":[{"j":..,"k":..,"l":..,"re":..,"im":..}]}
inline json to_json(const HermiteExpansion& f) {
    json coeffs = json::array();
    for (const auto& [key, v] : f.coeffs())
        coeffs.push_back(json{{"j", key.j}, {"k", key.k}, {"l", key.l},
                              {"re", v.real()}, {"im", v.imag()}});
    return json{{"m", f.m()}, {"n", f.n()}, {"coeffs", coeffs}};
}

inline HermiteExpansion expansion_from_json(const json& j) {
    HermiteExpansion f(j.at("m").get<int>(), j.at("n").get<int>());
    for (const auto& c : j.at("coeffs"))
        f.set(c.at("j").get<long>(), c.at("k").get<long>(), c.at("l").get<long>(),
              {c.at("re").get<double>(), c.at("im").get<double>()});
    return f;
}

/// {"kind":"poly_in_u","coeffs":[...]} or {"kind":"table","u":[...],"v":[...]}
inline json to_json(const RadialPotential& p) {
    if (p.kind == RadialPotential::Kind::PolyInU)
        return json{{"kind", "poly_in_u"}, {"coeffs", p.coeffs}};
    return json{{"kind", "table"}, {"u", p.u}, {"v", p.v}};
}

inline RadialPotential potential_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "poly_in_u")
        return RadialPotential::poly_in_u(j.at("coeffs").get<std::vector<double>>());
    if (kind == "table")
        return RadialPotential::table(j.at("u").get<std::vector<double>>(),
                                      j.at("v").get<std::vector<double>>());
    throw ParseError("potential_from_json: unknown kind '" + kind + "'");
}

/// Basis dump: polynomials with a parallel "norm2" array.
inline json to_json(const SuperHarmonicBasis& b) {
    json elements = json::array(), norms = json::array();
    for (std::size_t i = 0; i < b.elements.size(); ++i) {
        elements.push_back(to_json(b.elements[i]));
        norms.push_back(to_json(b.norm2[i]));
    }
    return json{{"m", b.m}, {"n", b.n}, {"degree", b.degree},
                {"elements", elements}, {"norm2", norms}};
}

}  // namespace superspace
