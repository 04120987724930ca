#include <gtest/gtest.h>

#include <cstring>
#include <sstream>

#include "cgo/calculus.hpp"
#include "cgo/serialize.hpp"

using namespace cgo;

TEST(Serialize, BinaryRoundTrip)
{
    const Grid g(16, 3.5);
    CounterRng rng(1);
    const auto f = random_bandlimited(g, rng, 5);
    std::stringstream ss;
    write_binary(ss, f);
    EXPECT_EQ(ss.str().size(), 4 + 4 + 4 + 8 + 4 + 8 + 16 * g.size() * kBlades);
    const auto back = read_binary(ss);
    EXPECT_EQ(back.grid(), g);
    EXPECT_EQ(back.data(), f.data());
}

TEST(Serialize, BinaryHeaderLayout)
{
    const Grid g(8, 1.0);
    FormField f(g);
    f(7, 0) = {1.0, -2.0};
    std::stringstream ss;
    write_binary(ss, f);
    const std::string s = ss.str();
    EXPECT_EQ(s.substr(0, 4), "CGOF");
    std::uint32_t n = 0;
    std::memcpy(&n, s.data() + 8, 4);
    EXPECT_EQ(n, 8u);
    EXPECT_EQ(static_cast<unsigned char>(s[24 + 4]), 3u);  // dx1^dx2 is the fifth component
    double re = 0.0;
    std::memcpy(&re, s.data() + 32 + 7 * g.size() * 16, 8);
    EXPECT_EQ(re, 1.0);
}

TEST(Serialize, RejectsCorruptInput)
{
    std::stringstream bad("XXXX");
    EXPECT_THROW(read_binary(bad), Error);
    const Grid g(8, 1.0);
    std::stringstream ss;
    write_binary(ss, FormField(g));
    std::string s = ss.str();
    s.resize(s.size() - 5);
    std::stringstream truncated(s);
    EXPECT_THROW(read_binary(truncated), Error);
}

TEST(Serialize, JsonRoundTrip)
{
    const Grid g(8, 2.0);
    CounterRng rng(2);
    const auto f = random_bandlimited(g, rng, 3);
    const auto j = to_json(f);
    EXPECT_EQ(j["components"][4], "dx1^dx2");
    const auto back = from_json(nlohmann::json::parse(j.dump()));
    EXPECT_LT((back - f).max_abs(), 1e-15);
    EXPECT_THROW(to_json(FormField(Grid(32, 1.0))), Error);
}
