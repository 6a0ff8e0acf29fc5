#include <doctest.h>

#include "todacft/errors.hpp"
#include "todacft/weight_json.hpp"

using namespace toda;
using doctest::Approx;

TEST_CASE("weight JSON round trip in every basis") {
    const WeightVector v = WeightVector::from_omegas(0.37, -1.25);
    for (WeightBasis b : {WeightBasis::Omega, WeightBasis::Root, WeightBasis::Euclid}) {
        const nlohmann::json j = weight_to_json(v, b);
        CHECK(j.at("basis") == basis_name(b));
        const WeightVector w = weight_from_json_text(j.dump());
        CHECK(w.x == Approx(v.x).epsilon(1e-14));
        CHECK(w.y == Approx(v.y).epsilon(1e-14));
    }
}

TEST_CASE("malformed weight JSON is rejected") {
    for (const char* text : {"", "[1,2]", "{\"basis\":\"omega\"}", "{\"basis\":\"foo\",\"coords\":[1,2]}",
                             "{\"basis\":\"root\",\"coords\":[1]}", "{\"basis\":\"root\",\"coords\":[1,\"x\"]}", "{"}) {
        CHECK_THROWS_AS(weight_from_json_text(text), Error);
    }
}
