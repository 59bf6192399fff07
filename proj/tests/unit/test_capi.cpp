#include <doctest.h>

#include <json.hpp>
#include <string>

#include "resolvex/resolvex.h"
#include "support.hpp"

using json = nlohmann::json;

namespace {

struct Auto {
  rvx_automaton* a = nullptr;
  explicit Auto(const std::string& name) {
    char* err = nullptr;
    rvx_automaton_load(rxtest::fixture_path(name + ".nfa").c_str(), &a, &err);
    rvx_string_free(err);
  }
  ~Auto() { rvx_automaton_free(a); }
};

template <class F>
std::pair<rvx_status, json> call(F f) {
  char* out = nullptr;
  rvx_status st = f(&out);
  json j = out ? json::parse(out) : json();
  rvx_string_free(out);
  return {st, j};
}

}  // namespace

TEST_CASE("load errors") {
  rvx_automaton* a = nullptr;
  char* err = nullptr;
  CHECK(rvx_automaton_parse("nfa x\nalphabet a\nstate p init\ntrans p b p\nend\n", &a, &err) == RVX_ERR_PARSE);
  CHECK(a == nullptr);
  REQUIRE(err);
  CHECK(json::parse(err)["error"]["kind"] == "UnknownSymbol");
  rvx_string_free(err);
  err = nullptr;
  CHECK(rvx_automaton_load("/nonexistent/file.nfa", &a, &err) == RVX_ERR_INPUT);
  rvx_string_free(err);
}

TEST_CASE("classify report") {
  Auto f("infamb");
  auto [st, j] = call([&](char** o) { return rvx_classify(f.a, nullptr, o); });
  CHECK(st == RVX_OK);
  CHECK(j["kind"] == "Infinite");
  CHECK(j["automaton"] == "infamb");
}

TEST_CASE("check-pr statuses") {
  Auto a("fig1a"), b("fig1b"), c("fnfa4");
  CHECK(call([&](char** o) { return rvx_check_pr(a.a, nullptr, o); }).first == RVX_OK);
  auto [sb, jb] = call([&](char** o) { return rvx_check_pr(b.a, nullptr, o); });
  CHECK(sb == RVX_NEGATIVE);
  CHECK(jb["witness"]["word"] == "bb");
  CHECK(call([&](char** o) { return rvx_check_pr(c.a, nullptr, o); }).first == RVX_NEGATIVE);
}

TEST_CASE("lambda reports use exact strings") {
  Auto a("fig1a");
  auto [st, j] = call([&](char** o) { return rvx_lambda_maximize(a.a, nullptr, o); });
  CHECK(st == RVX_OK);
  CHECK(j["lambda"] == "1/2");
  CHECK(j["status"] == "Certified");
  auto [s2, j2] = call([&](char** o) { return rvx_lambda_check(a.a, "501/1000", nullptr, o); });
  CHECK(s2 == RVX_NEGATIVE);
  auto [s3, j3] = call([&](char** o) { return rvx_lambda_check(a.a, "1/x", nullptr, o); });
  CHECK(s3 == RVX_ERR_PARSE);
  CHECK(j3.contains("error"));
}

TEST_CASE("reports are deterministic") {
  Auto a("pump2");
  rvx_options o;
  rvx_options_init(&o);
  o.seed = 5;
  auto x = call([&](char** out) { return rvx_lambda_maximize(a.a, &o, out); });
  auto y = call([&](char** out) { return rvx_lambda_maximize(a.a, &o, out); });
  CHECK(x.second.dump() == y.second.dump());
}

TEST_CASE("synthesized resolvers evaluate through the api") {
  Auto a("ufa-dag");
  auto [st, j] = call([&](char** o) { return rvx_synthesize(a.a, nullptr, o); });
  REQUIRE(st == RVX_OK);
  std::string res = j["resolver"];
  auto [se, je] = call([&](char** o) { return rvx_eval(a.a, res.c_str(), "be", 0, nullptr, o); });
  CHECK(se == RVX_OK);
  CHECK(je["probability"] == "1/3");
}

TEST_CASE("witnesses from reports verify") {
  Auto b("fig1b"), c("fnfa4");
  auto [_, jb] = call([&](char** o) { return rvx_check_pr(b.a, nullptr, o); });
  std::string wb = jb["witness"]["text"];
  auto vb = call([&](char** o) { return rvx_verify_witness(b.a, nullptr, wb.c_str(), o); });
  CHECK(vb.second["valid"] == true);
  auto [__, jc] = call([&](char** o) { return rvx_check_pr(c.a, nullptr, o); });
  for (const auto& s : jc["supports"]) {
    std::string sup = s["support"], w = s["witness"];
    auto v = call([&](char** o) { return rvx_verify_witness(c.a, sup.c_str(), w.c_str(), o); });
    CHECK(v.first == RVX_OK);
    CHECK(v.second["valid"] == true);
  }
}

TEST_CASE("generators and constraints") {
  char* text = nullptr;
  REQUIRE(rvx_gen_spectrum(1, 2, &text) == RVX_OK);
  rvx_automaton* s = nullptr;
  CHECK(rvx_automaton_parse(text, &s, nullptr) == RVX_OK);
  rvx_string_free(text);
  char* cons = nullptr;
  CHECK(rvx_constraints(s, nullptr, nullptr, RVX_FORMAT_NATIVE, &cons) == RVX_OK);
  CHECK(std::string(cons).find("# lambda symbolic") != std::string::npos);
  rvx_string_free(cons);
  rvx_automaton_free(s);
  char* bad = nullptr;
  CHECK(rvx_gen_spectrum(2, 4, &bad) == RVX_ERR_INPUT);
  rvx_string_free(bad);
}

TEST_CASE("status names") {
  CHECK(std::string(rvx_status_name(RVX_NEGATIVE)) != std::string(rvx_status_name(RVX_OK)));
  CHECK(std::string(rvx_version()).size() > 0);
}
