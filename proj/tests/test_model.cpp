#include "relcost/model.hpp"

#include <doctest.h>

using namespace relcost;

namespace
{
    bool has_violation(const std::vector<Violation> &vs, const std::string &message)
    {
        for (const Violation &v : vs)
            if (v.message == message)
                return true;
        return false;
    }
} // namespace

TEST_SUITE("model")
{
    TEST_CASE("validate reports the broken bound by name")
    {
        SystemParams p;
        p.gamma = 1.0;
        auto vs = validate(p, CostParams{});
        REQUIRE(vs.size() == 1);
        CHECK(vs[0].field == "gamma");
        CHECK(vs[0].message == "gamma must be < 1");

        p = SystemParams{};
        p.beta_p = 0.0;
        vs = validate(p, CostParams{});
        REQUIRE(vs.size() == 1);
        CHECK(vs[0].field == "beta_p");
        CHECK(vs[0].message == "beta_p must be > 0");

        CHECK(validate(SystemParams{}, CostParams{}).empty());
    }

    TEST_CASE("validate covers every field")
    {
        SystemParams p;
        p.alpha_p = -0.1;
        p.alpha_q = 1.5;
        p.beta_q = 2.0;
        p.tau = 0;
        p.delta = 0;
        p.sigma = 1.1;
        CostParams c;
        c.n_exp = 1.0;
        c.c_send = -1.0;
        const auto vs = validate(p, c);
        for (const char *field : {"alpha_p", "alpha_q", "beta_q", "tau", "delta", "sigma", "n_exp", "c_send"})
        {
            CAPTURE(field);
            CHECK(std::any_of(vs.begin(), vs.end(), [&](const Violation &v) { return v.field == field; }));
        }
    }

    TEST_CASE("validate is pure")
    {
        SystemParams p;
        p.gamma = 3.0;
        p.beta_p = -1.0;
        CHECK(validate(p, CostParams{}) == validate(p, CostParams{}));
    }

    TEST_CASE("alpha 0 and 1 are both legal")
    {
        SystemParams p;
        p.alpha_p = 0.0;
        p.alpha_q = 1.0;
        CHECK(validate(p, CostParams{}).empty());
    }

    TEST_CASE("combined crash rate")
    {
        SystemParams p;
        p.beta_p = p.beta_q = 0.01;
        CHECK(combined_crash_rate(p) == doctest::Approx(0.0199).epsilon(1e-12));

        p.beta_p = 0.0;
        p.beta_q = 0.3;
        CHECK(combined_crash_rate(p) == doctest::Approx(0.3));

        p.beta_p = p.beta_q = 1.0;
        CHECK(combined_crash_rate(p) == 1.0);
    }

    TEST_CASE("combined crash rate is symmetric and bounded")
    {
        for (double a = 0.05; a <= 1.0; a += 0.05)
        {
            for (double b = 0.05; b <= 1.0; b += 0.05)
            {
                SystemParams p, q;
                p.beta_p = a;
                p.beta_q = b;
                q.beta_p = b;
                q.beta_q = a;
                const double c = combined_crash_rate(p);
                CHECK(c == doctest::Approx(combined_crash_rate(q)));
                CHECK(c >= std::max(a, b) - 1e-12);
                CHECK(c <= 1.0 + 1e-12);
            }
        }
    }

    TEST_CASE("exponential cost condition")
    {
        SystemParams p;
        CostParams c;
        c.n_exp = 1.5;
        CHECK(validate_c1(p, c).empty());
        c.n_exp = 1.01;
        CHECK(has_violation(validate_c1(p, c), "n_exp * (1 - beta_p) * (1 - beta_q) must be > 1"));
    }

    TEST_CASE("pathological ack base")
    {
        SystemParams p;
        p.gamma = 0.5;
        ProtocolSpec s{ProtocolKind::Pathological, 2.0};
        CHECK(validate_protocol(s, p).empty());
        CHECK(!validate_protocol(s, p, true).empty());
        p.gamma = 0.75;
        CHECK(validate_protocol(s, p, true).empty());
        s.ack_base = 1.0;
        CHECK(!validate_protocol(s, p).empty());
        CHECK(validate_protocol(ProtocolSpec{ProtocolKind::SRhb, 0.5}, p).empty());
    }

    TEST_CASE("protocol names")
    {
        for (const char *name : {"trivial", "sender", "receiver", "srhb", "pathological"})
            CHECK(to_string(protocol_kind_from_string(name)) == name);
        CHECK_THROWS_AS(protocol_kind_from_string("tcp"), PreconditionError);
    }

    TEST_CASE("parameters load from flat JSON")
    {
        const auto doc = nlohmann::json::parse(R"({"alpha_p":1,"alpha_q":0.5,"beta_p":0.2,"beta_q":0.3,
            "gamma":0.1,"tau":4,"delta":3,"sigma":0.05})");
        const SystemParams p = system_params_from_json(doc);
        CHECK(p.alpha_p == 1.0);
        CHECK(p.alpha_q == 0.5);
        CHECK(p.beta_p == 0.2);
        CHECK(p.beta_q == 0.3);
        CHECK(p.gamma == 0.1);
        CHECK(p.tau == 4);
        CHECK(p.delta == 3);
        CHECK(p.sigma == 0.05);
        CHECK(system_params_from_json(to_json(p)) == p);

        const CostParams c = cost_params_from_json(nlohmann::json::parse(R"({"c_send":5,"c_wait":2,"n_exp":3})"));
        CHECK(c.c_send == 5.0);
        CHECK(cost_params_from_json(to_json(c)) == c);
    }

    TEST_CASE("JSON loading rejects unknown keys and bad types")
    {
        CHECK_THROWS_AS(system_params_from_json(nlohmann::json::parse(R"({"gamme":0.1})")), PreconditionError);
        CHECK_THROWS_AS(system_params_from_json(nlohmann::json::parse(R"({"tau":2.5})")), PreconditionError);
        CHECK_THROWS_AS(system_params_from_json(nlohmann::json::parse(R"({"gamma":"x"})")), PreconditionError);
        CHECK_THROWS_AS(cost_params_from_json(nlohmann::json::parse(R"({"c_sned":1})")), PreconditionError);
        CHECK_THROWS_AS(system_params_from_json(nlohmann::json::parse("[1,2]")), PreconditionError);
    }

    TEST_CASE("require_valid lists every violation")
    {
        SystemParams p;
        p.gamma = 1.0;
        p.tau = 0;
        try
        {
            require_valid(validate(p, CostParams{}));
            FAIL("expected PreconditionError");
        }
        catch (const PreconditionError &e)
        {
            const std::string what = e.what();
            CHECK(what.find("gamma must be < 1") != std::string::npos);
            CHECK(what.find("tau must be >= 1") != std::string::npos);
        }
    }
}
