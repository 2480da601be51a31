#include <gtest/gtest.h>

#include <cmath>

#include "support/fixtures.hpp"
#include "sparta/common/error.hpp"
#include "sparta/esm/economics.hpp"
#include "sparta/esm/instance_io.hpp"
#include "sparta/esm/validation.hpp"

using namespace sparta;

namespace {

esm::Instance heat_instance()
{
    esm::Instance in = testkit::dc_two_node();
    esm::Product heat;
    heat.id = "heat";
    heat.transportable = false;
    heat.import_cost.assign(1, 0.0);
    heat.secured_capacity_nodal.assign(2, 0.0);
    in.products.push_back(heat);
    for (esm::Component& c : in.components)
        c.ratio.push_back(0.0);
    esm::Component boiler = in.components[0];
    boiler.id = "boiler";
    boiler.ratio = {0.0, 1.0};
    boiler.capacity_limit = {esm::kInfinity, esm::kInfinity};
    in.components.push_back(boiler);
    in.demand.push_back(esm::Matrix(2, esm::Series(1, 1.0)));
    in.availability.push_back(esm::Matrix(2, esm::Series(1, 1.0)));
    in.existing_capacity.push_back(esm::Matrix(2, esm::Series(1, 0.0)));
    return in;
}

} // namespace

TEST(Economics, DiscountHorizonIsTheMinimum)
{
    EXPECT_EQ(esm::discount_horizon(40, 10), 10);
    EXPECT_EQ(esm::discount_horizon(8, 20), 8);
    EXPECT_EQ(esm::discount_horizon(10, 10), 10);
}

TEST(Economics, NpvFactorTabulatedValues)
{
    EXPECT_DOUBLE_EQ(esm::npv_factor(0.0, 10), 10.0);
    EXPECT_NEAR(esm::npv_factor(0.05, 1), 1.0 / 1.05, 1e-12);
    // High-precision reference: 7.72173492918481251...
    EXPECT_NEAR(esm::npv_factor(0.05, 10), 7.721734929184813, 1e-9);
    EXPECT_NEAR(esm::npv_factor(0.05, 10), 7.721735, 1e-6);
}

TEST(Economics, NpvFactorMonotone)
{
    for (double i : {0.001, 0.01, 0.03, 0.07, 0.15}) {
        for (int h = 1; h < 60; ++h)
            EXPECT_LT(esm::npv_factor(i, h), esm::npv_factor(i, h + 1)) << i << ' ' << h;
    }
    for (int h : {1, 5, 20, 50}) {
        const double rates[] = {0.001, 0.01, 0.03, 0.07, 0.15, 0.4};
        for (std::size_t k = 0; k + 1 < std::size(rates); ++k)
            EXPECT_GT(esm::npv_factor(rates[k], h), esm::npv_factor(rates[k + 1], h)) << h;
    }
}

TEST(Economics, NpvFactorAnnuityIdentity)
{
    for (double i : {1e-6, 0.001, 0.02, 0.05, 0.1, 0.5}) {
        for (int h : {1, 2, 7, 25, 80}) {
            const double lhs = esm::npv_factor(i, h) * i;
            const double rhs = -std::expm1(-h * std::log1p(i));
            EXPECT_NEAR(lhs, rhs, 1e-12 * std::abs(rhs)) << i << ' ' << h;
        }
    }
}

TEST(Validation, WellFormedInstanceIsClean)
{
    const esm::ValidationReport report = esm::validate_instance(testkit::dc_two_node());
    EXPECT_TRUE(report.ok()) << report.to_string();
    EXPECT_TRUE(esm::validate_instance(testkit::single_node(10.0)).ok());
    EXPECT_TRUE(esm::validate_instance(heat_instance()).ok()) << esm::validate_instance(heat_instance()).to_string();
}

TEST(Validation, AvailabilityOutOfRange)
{
    esm::Instance in = testkit::dc_two_node();
    in.availability[0][0][0] = 1.2;
    EXPECT_TRUE(esm::validate_instance(in).contains("availability out of [0,1]"));
}

TEST(Validation, GridOnNonTransportableProduct)
{
    esm::Instance in = heat_instance();
    in.components[1].ratio = {0.0, 1.0};
    EXPECT_TRUE(esm::validate_instance(in).contains("grid ratio on non-transportable product"));
}

TEST(Validation, CrossReferences)
{
    esm::Instance in = heat_instance();
    in.components[2].ratio = {1.0, 0.0};
    EXPECT_TRUE(esm::validate_instance(in).contains("demand for product no component can produce"));

    esm::Instance dup = testkit::dc_two_node();
    dup.topology.nodes[1].id = "n1";
    EXPECT_TRUE(esm::validate_instance(dup).contains("duplicate identifier"));

    esm::Instance heavy = testkit::single_node(1.0);
    heavy.temporal.time_steps.push_back({"t2", 1.0, 100.0});
    esm::allocate_series(heavy);
    heavy.products[0].import_cost.assign(2, 0.0);
    EXPECT_TRUE(esm::validate_instance(heavy).contains("time-step weights exceed one year"));

    esm::Instance ragged = testkit::single_node(1.0);
    ragged.demand[0][0].push_back(1.0);
    EXPECT_TRUE(esm::validate_instance(ragged).contains("series not fully populated"));
}

TEST(Validation, IdempotentAndSideEffectFree)
{
    esm::Instance in = heat_instance();
    in.availability[0][1][0] = -0.5;
    in.components[0].capacity_factor = 2.0;
    const std::string before = esm::dump_instance(in);
    const esm::ValidationReport a = esm::validate_instance(in);
    const esm::ValidationReport b = esm::validate_instance(in);
    EXPECT_FALSE(a.ok());
    EXPECT_EQ(a, b);
    EXPECT_EQ(before, esm::dump_instance(in));
}

TEST(InstanceDocument, RoundTripIsLossless)
{
    esm::Instance in = heat_instance();
    in.products[1].secured_capacity_nodal = {0.5, 1.5};
    in.ghg_limit = 12.5;
    in.interest_rate = 0.03;
    const std::string text = esm::dump_instance(in);
    const esm::Instance back = esm::parse_instance(text);
    EXPECT_EQ(text, esm::dump_instance(back));
    EXPECT_EQ(back.components[1].mode, esm::TransportMode::DcLoadFlow);
    EXPECT_TRUE(std::isinf(back.components[0].capacity_limit[0]));
    EXPECT_DOUBLE_EQ(back.products[1].secured_system(), 2.0);
}

TEST(InstanceDocument, SchemaIsRequired)
{
    EXPECT_THROW(esm::parse_instance("{\"products\": []}"), FormatError);
    EXPECT_THROW(esm::parse_instance("not json"), FormatError);
}
