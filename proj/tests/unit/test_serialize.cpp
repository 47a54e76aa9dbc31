#include <random>
#include <sstream>

#include <doctest.h>

#include "prevision/serialize.hpp"

using namespace prevision;

TEST_CASE("sha256: standard test vectors") {
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
  // block-boundary lengths
  CHECK(sha256_hex(std::string(55, 'a')) != sha256_hex(std::string(56, 'a')));
  CHECK(sha256_hex(std::string(64, 'a')) ==
        "ffe054fe7ae0cb6dc65c3af9b61d5209f439851db43d0ba5997337df154668eb");
}

namespace {

FittedModel sample_model(uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(-2.0, 2.0);
  std::normal_distribution<double> noise(0.0, 0.7);
  Matrix v(25, 3);
  for (Index i = 0; i < 25; ++i) {
    v(i, 0) = ux(rng);
    v(i, 1) = ux(rng);
    v(i, 2) = 0.4 + 1.1 * v(i, 0) - 0.2 * v(i, 1) + noise(rng);
  }
  return fit_linear_model(Dataset({"a", "b", "y"}, v), {"y", {"a", "b"}, true});
}

}  // namespace

TEST_CASE("model JSON round-trip is bit-exact") {
  const FittedModel model = sample_model(1);
  const json j = to_json(model);
  const std::string text = j.dump();
  const FittedModel back = model_from_json(json::parse(text));

  CHECK(back.spec == model.spec);
  CHECK(back.coefficients == model.coefficients);
  CHECK(back.residual_scale == model.residual_scale);
  CHECK(back.gram_inverse == model.gram_inverse);
  CHECK(back.n == model.n);
  CHECK(back.p == model.p);
  CHECK(back.data_fingerprint == model.data_fingerprint);

  // reconstructed model answers every query identically
  const Scenario sc{{"a", 0.3}, {"b", -0.9}};
  const auto d1 = predictive_distribution(model, sc);
  const auto d2 = predictive_distribution(back, sc);
  CHECK(prob_above(d1, 1.25) == prob_above(d2, 1.25));
}

TEST_CASE("model JSON validation failures") {
  const FittedModel model = sample_model(2);
  json j = to_json(model);

  SUBCASE("wrong gram size") {
    j["gram_inverse"] = std::vector<double>{1.0, 2.0};
    CHECK_THROWS_AS(model_from_json(j), ParseError);
  }
  SUBCASE("n <= p") {
    j["n"] = 2;
    CHECK_THROWS_AS(model_from_json(j), InsufficientDataError);
  }
  SUBCASE("asymmetric gram") {
    auto gram = j["gram_inverse"].get<std::vector<double>>();
    gram[1] += 0.5;
    j["gram_inverse"] = gram;
    CHECK_THROWS_AS(model_from_json(j), ContractError);
  }
  SUBCASE("missing field") {
    j.erase("coefficients");
    CHECK_THROWS_AS(model_from_json(j), json::exception);
  }
}

TEST_CASE("extended reals travel as strings in JSON") {
  CHECK(json_real(1.5) == json(1.5));
  CHECK(json_real(kInf) == json("inf"));
  CHECK(json_real(-kInf) == json("-inf"));
  CHECK(real_from_json(json("inf")) == kInf);
  CHECK(real_from_json(json(-2.5)) == -2.5);
  CHECK_THROWS_AS(real_from_json(json(nullptr)), ParseError);

  const auto e = ThresholdEvent::interval(-kInf, 2.0);
  const json je = to_json(e);
  CHECK(je["lower"] == "-inf");
  CHECK(je["upper"] == 2.0);
}

TEST_CASE("curve and table CSV carry the conditioning record and full precision") {
  const FittedModel model = sample_model(3);
  Vector grid(5);
  grid << -1.0, -0.5, 0.0, 0.5, 1.0;
  const auto event = ThresholdEvent::greater_than(1.0);
  const auto curve = relevance_curve(model, "a", grid, {{"b", 0.5}}, event);

  std::ostringstream out;
  write_csv(out, curve, model);
  const std::string text = out.str();
  CHECK(text.find("# conditioning:") != std::string::npos);
  CHECK(text.find(model.data_fingerprint) != std::string::npos);
  CHECK(text.find("a,probability") != std::string::npos);

  // data lines reparse to the exact probabilities
  std::istringstream lines(text);
  std::string line;
  std::getline(lines, line);  // comment
  std::getline(lines, line);  // header
  for (Index i = 0; i < grid.size(); ++i) {
    REQUIRE(std::getline(lines, line));
    const auto comma = line.find(',');
    CHECK(parse_double(line.substr(0, comma)) == grid[i]);
    CHECK(parse_double(line.substr(comma + 1)) == curve.probabilities[i]);
  }
}

TEST_CASE("verification report JSON holds the full per-observation table") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ux(-2.0, 2.0);
  std::normal_distribution<double> noise(0.0, 0.4);
  Matrix v(15, 3);
  for (Index i = 0; i < 15; ++i) {
    v(i, 0) = ux(rng);
    v(i, 1) = ux(rng);
    v(i, 2) = 1.0 + 0.5 * v(i, 0) + noise(rng);
  }
  const Dataset data({"a", "b", "y"}, v);
  const FittedModel full = fit_linear_model(data, {"y", {"a", "b"}, true});
  const FittedModel partial = fit_linear_model(data, {"y", {"a"}, true});
  const auto report = verify(full, partial, data);

  const json j = to_json(report);
  CHECK(j["per_observation"].size() == 15);
  CHECK(j["in_sample"] == true);
  CHECK(j["mean_crps_full"].get<double>() == report.mean_crps_full);
  CHECK(j["covariate_views"].size() == 2);

  std::ostringstream csv;
  write_csv(csv, report, data);
  CHECK(csv.str().find("index,observed,crps_full,crps_partial,skill,a,b") !=
        std::string::npos);
}
