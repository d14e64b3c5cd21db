#include "fixtures.hpp"
#include "pepa/analysis.hpp"
#include "pepa/ctmc.hpp"
#include "pepa/error.hpp"
#include "pepa/kernels.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

TEST(Ctmc, SmallClientServerHasEighteenStates) {
    auto ctmc = pepa::generate_ctmc(fixtures::load("client_server_small.pepa"));
    EXPECT_EQ(ctmc.size(), 18u);
    EXPECT_EQ(ctmc.states[static_cast<std::size_t>(ctmc.initial)], (pepa::StateVector{0, 2, 2, 0, 0}));
}

TEST(Ctmc, GeneratorRowsSumToZero) {
    auto ctmc = pepa::generate_ctmc(fixtures::load("three_small.pepa"));
    auto Q = ctmc.generator();
    for (int r = 0; r < Q.rows; ++r) {
        double sum = 0.0;
        for (int k = Q.row_ptr[static_cast<std::size_t>(r)]; k < Q.row_ptr[static_cast<std::size_t>(r) + 1]; ++k)
            sum += Q.val[static_cast<std::size_t>(k)];
        EXPECT_NEAR(sum, 0.0, 1e-12);
    }
    EXPECT_GT(ctmc.max_exit_rate(), 0.0);
}

TEST(Ctmc, ParallelGenerationMatchesSerial) {
    auto model = fixtures::load("client_server.pepa", {{"n_c", 30}});
    auto serial = pepa::generate_ctmc(model, {1'000'000, false});
    auto parallel = pepa::generate_ctmc(model, {1'000'000, true});
    EXPECT_EQ(serial, parallel);
}

TEST(Ctmc, StateCapIsEnforced) {
    try {
        pepa::generate_ctmc(fixtures::load("client_server.pepa"), {100, false});
        FAIL();
    } catch (const pepa::Error& e) {
        EXPECT_EQ(e.kind(), pepa::ErrorKind::state_cap);
    }
}

TEST(Ctmc, AggregatedStateCountIsTriangular) {
    for (int n : {1, 2, 3, 5, 8}) {
        auto text = pepa::read_text_file(fixtures::model_path("client_server.pepa"));
        auto pos = text.find("S_idle[5]");
        text.replace(pos, 9, "S_idle[" + std::to_string(n) + "]");
        auto m = pepa::parse_model(text);
        auto agg = pepa::generate_ctmc(pepa::reduce(m, pepa::partition_groups(m)));
        EXPECT_EQ(agg.size(), static_cast<std::size_t>((n + 2) * (n + 1) / 2)) << n;
    }
}

TEST(Ctmc, JsonAndMatrixMarket) {
    auto ctmc = pepa::generate_ctmc(fixtures::load("client_server_small.pepa"));
    auto j = pepa::to_json(ctmc);
    EXPECT_EQ(j["states"].size(), 18u);
    EXPECT_EQ(j["transitions"].size(), ctmc.transitions.size());
    std::ostringstream mm;
    pepa::write_matrix_market(mm, ctmc.generator());
    std::istringstream in(mm.str());
    std::string banner;
    std::getline(in, banner);
    EXPECT_EQ(banner.rfind("%%MatrixMarket matrix coordinate real general", 0), 0u);
}

TEST(Kernels, CsrFromTripletsSumsDuplicates) {
    auto A = pepa::CsrMatrix::from_triplets(2, 3, {{0, 1, 1.0}, {1, 2, 2.0}, {0, 1, 0.5}, {1, 0, -1.0}});
    EXPECT_EQ(A.nonzeros(), 3u);
    EXPECT_DOUBLE_EQ(A.at(0, 1), 1.5);
    EXPECT_DOUBLE_EQ(A.at(0, 0), 0.0);
    auto T = A.transpose();
    EXPECT_EQ(T.rows, 3);
    EXPECT_DOUBLE_EQ(T.at(2, 1), 2.0);
}

TEST(Kernels, ParallelSpmvMatchesSerial) {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> idx(0, 499);
    std::vector<pepa::CsrMatrix::Triplet> entries;
    for (int k = 0; k < 5000; ++k)
        entries.emplace_back(idx(rng), idx(rng), u(rng));
    auto A = pepa::CsrMatrix::from_triplets(500, 500, entries);
    std::vector<double> x(500), y1, y2;
    for (auto& v : x)
        v = u(rng);
    pepa::spmv_serial(A, x, y1);
    pepa::spmv_parallel(A, x, y2);
    EXPECT_EQ(y1, y2);
}

TEST(Kernels, ParallelExpansionMatchesSerial) {
    pepa::CompiledModel m(fixtures::load("three_small.pepa"));
    auto ctmc = pepa::generate_ctmc(m, m.initial_state());
    EXPECT_EQ(pepa::expand_serial(m, ctmc.states), pepa::expand_parallel(m, ctmc.states));
}
