#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <fstream>
#include <random>
#include <sstream>

#include <unistd.h>

#include "mdtgn/io.hpp"

using namespace mdtgn;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidArgument;
}

std::filesystem::path scratch_dir() {
  auto p = std::filesystem::temp_directory_path() / ("mdtgn_io_" + std::to_string(::getpid()));
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST(ParseSpec, AllTypes) {
  EXPECT_TRUE(std::holds_alternative<ZeroSpec>(parse_function_spec(Json::parse(R"({"type":"zero"})"))));
  const auto c = parse_function_spec(Json::parse(R"({"type":"constant","value":[1,2]})"));
  EXPECT_EQ(std::get<ConstantSpec>(c).value, Complex(1, 2));
  const auto ind = std::get<IndicatorSpec>(parse_function_spec(Json::parse(R"({"type":"indicator","lo":0,"hi":1})")));
  EXPECT_EQ(ind.lo, 0.0);
  EXPECT_EQ(ind.hi, 1.0);
  const auto b = std::get<BumpSpec>(
      parse_function_spec(Json::parse(R"({"type":"bump","center":0.1,"width":0.2,"amplitude":3,"phase":0.5})")));
  EXPECT_EQ(b.center, 0.1);
  EXPECT_EQ(b.width, 0.2);
  EXPECT_EQ(b.amplitude, 3.0);
  EXPECT_EQ(b.phase, 0.5);
  const auto s = std::get<BumpSumSpec>(
      parse_function_spec(Json::parse(R"({"type":"bump_sum","bumps":[{"center":1},{"center":2,"width":0.5}]})")));
  ASSERT_EQ(s.bumps.size(), 2u);
  EXPECT_EQ(s.bumps[1].width, 0.5);
  const auto t = std::get<TabulatedSpec>(
      parse_function_spec(Json::parse(R"({"type":"tabulated","values":[1,[0,1],{"re":2,"im":-1}]})")));
  ASSERT_EQ(t.values.size(), 3u);
  EXPECT_EQ(t.values[1], Complex(0, 1));
  EXPECT_EQ(t.values[2], Complex(2, -1));
}

TEST(ParseSpec, Errors) {
  EXPECT_EQ(kind_of([] { parse_function_spec(Json::parse(R"({"type":"sawtooth"})")); }), ErrorKind::UnknownSpec);
  EXPECT_EQ(kind_of([] { parse_function_spec(Json::parse(R"({"center":0})")); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { parse_function_spec(Json::parse(R"({"type":"bump","width":0})")); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { parse_function_spec(Json::parse(R"({"type":"indicator","lo":1,"hi":0})")); }),
            ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { parse_complex(Json::parse(R"("x")"), "c"); }), ErrorKind::ConfigError);
}

TEST(ParseConfig, FullDocument) {
  const auto j = Json::parse(R"({
    "name": "demo",
    "model": {"kind": "mdtgn", "m": 0.2, "lambda1": 1, "lambda2": 0.5, "lambda3": 0.25},
    "grid": {"x_min": -1, "x_max": 1, "dx": 0.0625, "T": 0.25},
    "data": {"f": {"type": "bump", "width": 0.1}, "kappa": 0.3},
    "solver": {"scheme": "splitstep", "epsilon0": 0.1, "max_iter": 7, "strict_smallness": true},
    "estimates": {"trials": 12, "seed": 9},
    "norms": {"T": 0.125},
    "convergence": {"dx": [0.01, 0.005], "min_order": 1.5},
    "gauge": {"a0_target": {"type": "constant", "value": 1}},
    "global": {"tau": 2}
  })");
  const auto rc = parse_config(j);
  EXPECT_EQ(rc.scenario.name, "demo");
  EXPECT_EQ(rc.scenario.params.lambda2, 0.5);
  EXPECT_EQ(rc.scenario.config.scheme, Scheme::splitstep);
  EXPECT_EQ(rc.scenario.config.max_iter, 7);
  EXPECT_TRUE(rc.scenario.config.strict_smallness);
  EXPECT_EQ(rc.scenario.data.kappa, 0.3);
  EXPECT_FALSE(rc.scenario.data.E0.has_value());
  EXPECT_EQ(rc.estimates.trials, 12);
  EXPECT_EQ(rc.estimates.field.seed, 9u);
  EXPECT_EQ(rc.norms.T, 0.125);
  EXPECT_EQ(rc.convergence.dx.size(), 2u);
  EXPECT_EQ(rc.global.tau, 2.0);
  const auto g = rc.grid();
  EXPECT_EQ(g.n_x, 33);
  EXPECT_EQ(g.n_t, 4);
}

TEST(ParseConfig, QuadraticModel) {
  const auto p = parse_model(Json::parse(R"({"kind":"quadratic","m":0.1,"c1":[0.8,0.6],"c4":-1})"));
  EXPECT_EQ(p.kind, ModelKind::quadratic);
  EXPECT_EQ(p.c1, Complex(0.8, 0.6));
  EXPECT_EQ(p.c2, Complex{});
  EXPECT_EQ(p.c4, Complex(-1.0));
}

TEST(ParseConfig, RejectsUnknownKeysAndBadValues) {
  EXPECT_EQ(kind_of([] { parse_config(Json::parse(R"({"modle":{}})")); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { parse_config(Json::parse(R"({"model":{"kind":"mdtgn","mass":1}})")); }),
            ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { parse_config(Json::parse(R"({"model":{"m":-1}})")); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { parse_config(Json::parse(R"({"solver":{"scheme":"euler"}})")); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { parse_config(Json::parse(R"({"solver":{"max_iter":0}})")); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { parse_config(Json::parse(R"({"grid":{"dx":-1}})")); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { parse_config(Json::parse(R"({"estimates":{"trials":1.5}})")); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { parse_config(Json::parse(R"({"convergence":{"dx":[0.1]}})")); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { parse_config(Json::parse(R"([1,2])")); }), ErrorKind::ConfigError);
}

TEST(LoadConfig, CommentsAndMissingFile) {
  const auto dir = scratch_dir();
  const auto path = dir / "c.json";
  {
    std::ofstream out(path);
    out << "// sample\n{\"grid\": {\"dx\": 0.125} /* inline */}\n";
  }
  EXPECT_EQ(load_config(path).dx, 0.125);
  EXPECT_EQ(kind_of([&] { load_config(dir / "missing.json"); }), ErrorKind::ConfigError);
  {
    std::ofstream out(path);
    out << "{\"grid\": ";
  }
  EXPECT_EQ(kind_of([&] { load_config(path); }), ErrorKind::ConfigError);
  std::filesystem::remove_all(dir);
}

TEST(FormatDouble, RoundTrips) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int k = 0; k < 1000; ++k) {
    const double x = u(rng) * std::ldexp(1.0, static_cast<int>(rng() % 200) - 100);
    EXPECT_EQ(std::strtod(format_double(x).c_str(), nullptr), x);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(-0.0), "-0");
}

TEST(Writers, FieldsCsvLayout) {
  const auto g = build_grid(0.0, 1.0, 0.5, 0.5);
  SolutionHistory sol;
  sol.spinor = SpinorHistory(g);
  sol.spinor.u(1, 0) = Complex(1.0, -2.0);
  std::ostringstream os;
  write_fields_csv(os, sol);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,t,re_u,im_u,re_v,im_v,A0,A1,E");
  std::getline(in, line);
  EXPECT_EQ(line, "0,0,0,0,0,0,0,0,0");
  std::getline(in, line);
  EXPECT_EQ(line, "0.5,0,1,-2,0,0,0,0,0");
  int rows = 2;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, g.n_x * (g.n_t + 1));
}

TEST(Writers, ReportsJsonAndSeries) {
  const std::vector<CheckReport> reps{check_le("a", 1.0, 2.0, 0.0, 0.0, "ctx"),
                                      check_eq("b", std::nan(""), 1.0, 0.0, 0.0)};
  const auto j = reports_to_json(reps);
  ASSERT_EQ(j.size(), 2u);
  EXPECT_EQ(j[0]["name"], "a");
  EXPECT_EQ(j[0]["margin"], 1.0);
  EXPECT_EQ(j[0]["pass"], true);
  EXPECT_EQ(j[0]["context"], "ctx");
  EXPECT_TRUE(j[1]["lhs"].is_null());
  EXPECT_EQ(j[1]["pass"], false);

  const auto dir = scratch_dir();
  write_reports(dir / "sub" / "r.json", reps);
  std::ifstream in(dir / "sub" / "r.json");
  EXPECT_EQ(Json::parse(in), j);
  write_series(dir / "s.csv", {0.0, 0.5}, {1.0, 2.0});
  std::ifstream s(dir / "s.csv");
  std::stringstream ss;
  ss << s.rdbuf();
  EXPECT_EQ(ss.str(), "t,value\n0,1\n0.5,2\n");
  EXPECT_THROW(write_series(dir / "x.csv", {0.0}, {}), Error);
  std::filesystem::remove_all(dir);
}
