// Copyright 2026 The volren Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "oracles.hpp"
#include "volren/fields.hpp"
#include "volren/medium.hpp"
#include "volren/renderer.hpp"

using namespace volren;

namespace {

std::string construction_message(std::vector<double> t, std::vector<double> s, std::vector<Rgb> c) {
  try {
    make_piecewise(std::move(t), std::move(s), std::move(c));
  } catch (const ConstructionError& e) {
    return e.what();
  }
  return "";
}

struct NegativeField {
  FieldSample evaluate(const Vec3&) const { return {-1.0, {0, 0, 0}}; }
};
struct NanField {
  FieldSample evaluate(const Vec3&) const { return {std::numeric_limits<double>::quiet_NaN(), {0, 0, 0}}; }
};
struct BrightField {
  FieldSample evaluate(const Vec3&) const { return {1.0, {1.5, 0, 0}}; }
};

}  // namespace

TEST(RayTest, PointExamples) {
  EXPECT_EQ(ray_point(Ray({0, 0, 0}, {0, 0, 1}, 0, 10), 0.0), (Vec3{0, 0, 0}));
  EXPECT_EQ(ray_point(Ray({1, 2, 3}, {1, 0, 0}, 0, 10), 2.0), (Vec3{3, 2, 3}));
  const Vec3 p = ray_point(Ray({0, 0, 0}, {0.6, 0.8, 0}, 0, 10), 5.0);
  EXPECT_DOUBLE_EQ(p.x, 3.0);
  EXPECT_DOUBLE_EQ(p.y, 4.0);
  EXPECT_EQ(p.z, 0.0);
}

TEST(RayTest, PointOutsideBoundsIsDomainError) {
  const Ray ray({0, 0, 0}, {0, 0, 1}, 1.0, 2.0);
  EXPECT_THROW(ray_point(ray, 0.5), DomainError);
  EXPECT_THROW(ray_point(ray, 2.5), DomainError);
  EXPECT_NO_THROW(ray_point(ray, 1.0));
  EXPECT_NO_THROW(ray_point(ray, 2.0));
}

TEST(RayTest, InvariantsEnforced) {
  EXPECT_THROW(Ray({0, 0, 0}, {0, 0, 2}, 0, 1), ConstructionError);
  EXPECT_THROW(Ray({0, 0, 0}, {0, 0, 1}, -0.1, 1), ConstructionError);
  EXPECT_THROW(Ray({0, 0, 0}, {0, 0, 1}, 1, 1), ConstructionError);
  EXPECT_THROW(Ray({0, 0, 0}, {0, 0, 1}, 2, 1), ConstructionError);
  EXPECT_NO_THROW(Ray({0, 0, 0}, {0, 0, 1.0 + 5e-10}, 0, 1));
  const Ray r = Ray::normalized({0, 0, 0}, {3, 4, 0}, 0, 1);
  EXPECT_NEAR(norm(r.direction()), 1.0, 1e-15);
  EXPECT_THROW(Ray::normalized({0, 0, 0}, {0, 0, 0}, 0, 1), ConstructionError);
}

TEST(PiecewiseMediumTest, DirectConstruction) {
  const auto m = make_piecewise({0, 1, 2}, {0.5, 0.5}, {{1, 0, 0}, {0, 1, 0}});
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m.deltas()[0], 1.0);
  EXPECT_EQ(m.deltas()[1], 1.0);
  EXPECT_EQ(m.cumulative_depth()[2], 1.0);
}

TEST(PiecewiseMediumTest, ErrorsNameFirstOffendingSegment) {
  EXPECT_EQ(construction_message({0, 1, 1}, {1, 1}, {{0, 0, 0}, {0, 0, 0}}), "zero-length segment at n=2");
  EXPECT_EQ(construction_message({0, 1}, {-0.1}, {{0, 0, 0}}), "negative density at n=1");
  EXPECT_EQ(construction_message({0, 2, 1}, {1, 1}, {{0, 0, 0}, {0, 0, 0}}), "decreasing boundaries at n=2");
  EXPECT_EQ(construction_message({0, 1, 2}, {1, std::nan("")}, {{0, 0, 0}, {0, 0, 0}}), "NaN density at n=2");
  EXPECT_EQ(construction_message({0, std::nan(""), 2}, {1, 1}, {{0, 0, 0}, {0, 0, 0}}), "non-finite boundary at n=1");
  EXPECT_EQ(construction_message({0, 1}, {1}, {{0, 1.5, 0}}), "color outside [0,1] at n=1");
  EXPECT_EQ(construction_message({0, 1}, {1}, {{0, std::nan(""), 0}}), "non-finite color at n=1");
  EXPECT_EQ(construction_message({0, 1}, {INFINITY}, {{0, 0, 0}}), "non-finite density at n=1");
  // The first offending index wins even when later segments are also bad.
  EXPECT_EQ(construction_message({0, 1, 1, 0}, {-1, -1, 1}, {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}),
            "negative density at n=1");
}

TEST(PiecewiseMediumTest, LengthMismatch) {
  EXPECT_THROW(make_piecewise({0, 1, 2}, {1}, {{0, 0, 0}}), ConstructionError);
  EXPECT_THROW(make_piecewise({0, 1}, {1}, {{0, 0, 0}, {0, 0, 0}}), ConstructionError);
  EXPECT_THROW(make_piecewise({0}, {}, {}), ConstructionError);
}

TEST(SampleFieldTest, BuiltInExamples) {
  const Ray ray({0, 0, -1}, {0, 0, 1}, 0, 2);
  const ConstantField constant{2.0, {1, 1, 1}};
  for (double t : {0.0, 0.7, 2.0}) {
    const FieldSample s = sample_field(constant, ray, t);
    EXPECT_EQ(s.sigma, 2.0);
    EXPECT_EQ(s.color, (Rgb{1, 1, 1}));
  }

  BlobField blob;
  blob.peak = 3.5;
  EXPECT_EQ(sample_field(blob, ray, 1.0).sigma, 3.5);  // ray passes the center at t=1

  StepField step;
  step.sigma_before = 0.0;
  step.sigma_after = 4.0;
  step.color_before = {0.2, 0.3, 0.4};
  const FieldSample before = sample_field(step, ray, 0.5);
  EXPECT_EQ(before.sigma, 0.0);
  EXPECT_EQ(before.color, (Rgb{0.2, 0.3, 0.4}));
  EXPECT_EQ(sample_field(step, ray, 1.5).sigma, 4.0);
}

TEST(SampleFieldTest, InvalidFieldValuesAreEvaluationErrors) {
  const Ray ray({0, 0, 0}, {0, 0, 1}, 0, 1);
  EXPECT_THROW(sample_field(NegativeField{}, ray, 0.5), EvaluationError);
  EXPECT_THROW(sample_field(NanField{}, ray, 0.5), EvaluationError);
  EXPECT_THROW(sample_field(BrightField{}, ray, 0.5), EvaluationError);
  EXPECT_THROW(sample_field(ConstantField{}, ray, 1.5), DomainError);
}

TEST(DiscretizeTest, ConstantFieldGivesEqualDensities) {
  const ConstantField f{1.3, {0.5, 0.5, 0.5}};
  const Ray ray({0, 0, 0}, {1, 0, 0}, 0.25, 3.0);
  for (std::size_t n : {1u, 2u, 7u, 64u}) {
    const auto m = discretize(f, ray, n);
    ASSERT_EQ(m.size(), n);
    for (double s : m.sigmas()) EXPECT_EQ(s, 1.3);
  }
}

TEST(DiscretizeTest, SingleUniformSegmentSamplesMidpoint) {
  // Density equal to the sample position along z exposes where it was read.
  struct Probe {
    FieldSample evaluate(const Vec3& p) const { return {p.z, {0, 0, 0}}; }
  };
  const Ray ray({0, 0, 0}, {0, 0, 1}, 1.0, 4.0);
  const auto m = discretize(Probe{}, ray, 1);
  EXPECT_EQ(m.sigmas()[0], 2.5);
}

TEST(DiscretizeTest, StratifiedIsReproducibleAndInsideSegments) {
  struct Probe {
    FieldSample evaluate(const Vec3& p) const { return {p.z, {0, 0, 0}}; }
  };
  const Ray ray({0, 0, 0}, {0, 0, 1}, 0.5, 2.5);
  const auto a = discretize(Probe{}, ray, 50, Placement::stratified(99));
  const auto b = discretize(Probe{}, ray, 50, Placement::stratified(99));
  const auto c = discretize(Probe{}, ray, 50, Placement::stratified(100));
  ASSERT_EQ(a.size(), 50u);
  bool any_differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.sigmas()[i], b.sigmas()[i]);
    EXPECT_GE(a.sigmas()[i], a.boundaries()[i]);
    EXPECT_LE(a.sigmas()[i], a.boundaries()[i + 1]);
    any_differs = any_differs || a.sigmas()[i] != c.sigmas()[i];
  }
  EXPECT_TRUE(any_differs);
}

TEST(DiscretizeTest, BoundariesPartitionTheRay) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const BlobField blob;
  for (int trial = 0; trial < 200; ++trial) {
    const double t0 = 3.0 * unit(gen);
    const double t1 = t0 + 0.01 + 5.0 * unit(gen);
    const std::size_t n = 1 + static_cast<std::size_t>(unit(gen) * 300);
    const Ray ray({0, 0, -2}, {0, 0, 1}, t0, t1);
    const auto m = discretize(blob, ray, n, trial % 2 ? Placement::uniform() : Placement::stratified(trial));
    EXPECT_EQ(m.boundaries().front(), t0);
    EXPECT_EQ(m.boundaries().back(), t1);
    const double total = std::accumulate(m.deltas().begin(), m.deltas().end(), 0.0);
    EXPECT_NEAR(total, t1 - t0, 1e-12);
  }
}

TEST(DiscretizeTest, ConstantFieldRendersToClosedFormForEveryN) {
  const ConstantField f{0.9, {0.2, 0.6, 1.0}};
  const Ray ray({0, 0, 0}, {0, 1, 0}, 0.0, 2.7);
  const Rgb exact = render_homogeneous(0.9, f.color, 0.0, 2.7);
  for (std::size_t n = 1; n <= 257; n += 8) {
    EXPECT_LE(max_abs_diff(render_piecewise(discretize(f, ray, n)).color, exact), 1e-12) << n;
  }
}

TEST(DiscretizeTest, RejectsZeroSegments) {
  EXPECT_THROW(discretize(ConstantField{}, Ray({0, 0, 0}, {0, 0, 1}, 0, 1), 0), DomainError);
}

TEST(DiscretizeTest, PropagatesFieldErrors) {
  EXPECT_THROW(discretize(NegativeField{}, Ray({0, 0, 0}, {0, 0, 1}, 0, 1), 4), EvaluationError);
}
