// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "vfl/cost_ledger.hpp"
#include "vfl/errors.hpp"
#include "vfl/he_backend.hpp"

using namespace vfl;

TEST_CASE("merge sums counters and takes the max depth") {
    CHECK(merge({}).adds() == 0);
    CHECK(merge({}).max_depth() == 0);

    CostLedger a("a"), b("b"), c("c");
    a.record_add();
    a.observe_depth(2);
    b.record_ct_ct_mul();
    b.record_rotation();
    b.observe_depth(5);
    c.record_ct_pt_mul();
    c.record_add();

    const CostLedger abc = merge({a, b, c}, "sum");
    CHECK(abc.adds() == 2);
    CHECK(abc.ct_ct_mults() == 1);
    CHECK(abc.ct_pt_mults() == 1);
    CHECK(abc.rotations() == 1);
    CHECK(abc.max_depth() == 5);
    CHECK(abc.scope_tag() == "sum");

    // counter-wise commutativity / associativity
    const CostLedger cba = merge({c, b, a});
    CHECK(cba.adds() == abc.adds());
    CHECK(cba.total_mults() == abc.total_mults());
    CHECK(cba.max_depth() == abc.max_depth());
    const CostLedger nested = merge({merge({a, b}), c});
    CHECK(nested.adds() == abc.adds());
    CHECK(nested.rotations() == abc.rotations());
}

TEST_CASE("every arithmetic primitive increments exactly one counter") {
    const KeyPair key = keygen(32);
    CostLedger ledger;
    std::int64_t adds = 0, ctct = 0, ctpt = 0, rots = 0;

    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> op_dist(0, 4);
    TrackedCiphertext acc = encrypt(key, Vector::Constant(2, 1.0));
    const TrackedCiphertext unit = encrypt(key, Vector::Constant(2, 1.0));
    for (int step = 0; step < 500; ++step) {
        const std::int64_t before =
            ledger.adds() + ledger.ct_ct_mults() + ledger.ct_pt_mults() + ledger.rotations();
        switch (op_dist(rng)) {
            case 0:
                acc = add(acc, encrypt(key, Vector::Constant(acc.size(), 0.5)), ledger);
                ++adds;
                break;
            case 1:
                acc = add_plain(acc, Vector::Constant(acc.size(), -0.5), ledger);
                ++adds;
                break;
            case 2:
                if (acc.depth + 1 > acc.budget) continue;
                acc = mul(acc, encrypt(key, Vector::Constant(acc.size(), 1.0)), ledger);
                ++ctct;
                break;
            case 3:
                if (acc.depth + 1 > acc.budget) continue;
                acc = mul_plain(acc, 1.0, ledger);
                ++ctpt;
                break;
            default:
                if (acc.size() > 64) continue;  // keep payloads small
                acc = rotate_concat(acc, unit, ledger);
                ++rots;
                break;
        }
        const std::int64_t after =
            ledger.adds() + ledger.ct_ct_mults() + ledger.ct_pt_mults() + ledger.rotations();
        CHECK(after == before + 1);
    }
    CHECK(ledger.adds() == adds);
    CHECK(ledger.ct_ct_mults() == ctct);
    CHECK(ledger.ct_pt_mults() == ctpt);
    CHECK(ledger.rotations() == rots);
}

TEST_CASE("ceil_log2 and the depth-law tables") {
    CHECK(ceil_log2(1) == 0);
    CHECK(ceil_log2(2) == 1);
    CHECK(ceil_log2(3) == 2);
    CHECK(ceil_log2(4) == 2);
    CHECK(ceil_log2(5) == 3);
    CHECK(ceil_log2(8) == 3);
    CHECK(ceil_log2(9) == 4);
    CHECK_THROWS_AS(ceil_log2(0), InvalidInputError);

    const int lr_row[] = {3, 4, 5, 5, 6};
    for (int d = 1; d <= 5; ++d) {
        CHECK(required_depth(ModelKind::lr, nullptr, d) == lr_row[d - 1]);
        CHECK(published_depth(ModelKind::lr, nullptr, d) == lr_row[d - 1]);
    }

    const KernelSpec lin = KernelSpec::linear();
    const KernelSpec rbf2 = KernelSpec::rbf_taylor2(1.0);
    for (int d = 1; d <= 5; ++d) {
        CHECK(required_depth(ModelKind::klr, &lin, d) == lr_row[d - 1]);
        CHECK(published_depth(ModelKind::klr, &lin, d) == lr_row[d - 1] + 1);
        CHECK(required_depth(ModelKind::klr, &rbf2, d) == lr_row[d - 1] + 1);
        CHECK(published_depth(ModelKind::klr, &rbf2, d) == lr_row[d - 1] + 2);
    }
    for (int d_poly : {1, 2, 3, 5}) {
        const KernelSpec poly = KernelSpec::polynomial(1.0, d_poly);
        CHECK(kernel_entry_depth(poly) == d_poly - 1);
        for (int d = 1; d <= 5; ++d) {
            CHECK(required_depth(ModelKind::klr, &poly, d) == lr_row[d - 1] + d_poly - 1);
            CHECK(published_depth(ModelKind::klr, &poly, d) ==
                  required_depth(ModelKind::klr, &poly, d));
        }
    }
    CHECK_THROWS_AS(required_depth(ModelKind::klr, nullptr, 3), InvalidInputError);
    const KernelSpec rbf_plain = KernelSpec::rbf(1.0);
    CHECK_THROWS_AS(kernel_entry_depth(rbf_plain), InvalidInputError);
}

TEST_CASE("verify_table1 checks the per-protocol cost rows") {
    CostLedger lin_ledger;
    lin_ledger.record_add();
    CHECK(verify_table1(lin_ledger, "secure_linear_kernel").passed);

    CostLedger rbf_ledger;
    for (int i = 0; i < 4; ++i) rbf_ledger.record_add();
    rbf_ledger.record_ct_ct_mul();
    CHECK(verify_table1(rbf_ledger, "secure_rbf_kernel").passed);
    CHECK_FALSE(verify_table1(rbf_ledger, "secure_linear_kernel").passed);

    CostLedger poly_ledger;
    poly_ledger.record_add();
    poly_ledger.record_add();
    for (int i = 0; i < 4; ++i) poly_ledger.record_ct_ct_mul();
    const Table1Check check = verify_table1(poly_ledger, "secure_poly_kernel", 5);
    CHECK(check.passed);
    CHECK(check.expected_mults == 4);

    CostLedger empty;
    CHECK(verify_table1(empty, "secure_data_exchange").passed);
    CHECK_THROWS_AS(verify_table1(empty, "no_such_protocol"), InvalidInputError);
}

TEST_CASE("verify_depth separates exact rows from upper-bound rows") {
    const DepthCheck lr = verify_depth(5, ModelKind::lr, nullptr, 3);
    CHECK(lr.status == DepthCheck::Status::pass_exact);
    CHECK(lr.published == 5);

    const KernelSpec poly3 = KernelSpec::polynomial(1.0, 3);
    const DepthCheck poly = verify_depth(7, ModelKind::klr, &poly3, 3);
    CHECK(poly.status == DepthCheck::Status::pass_exact);
    CHECK(poly.published == 7);

    const KernelSpec lin = KernelSpec::linear();
    const DepthCheck linear = verify_depth(5, ModelKind::klr, &lin, 3);
    CHECK(linear.status == DepthCheck::Status::pass_upper_bound);
    CHECK(linear.published == 6);
    CHECK(!linear.note.empty());

    CHECK(verify_depth(4, ModelKind::lr, nullptr, 3).status == DepthCheck::Status::fail);
    CHECK(verify_depth(6, ModelKind::lr, nullptr, 3).status == DepthCheck::Status::fail);
}
