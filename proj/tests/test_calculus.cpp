#include <doctest.h>

#include <memory>

#include "rcp/errors.hpp"
#include "rcp/proof.hpp"
#include "rcp/sequent.hpp"

using namespace rcp;

namespace {

Word W(const char* s) { return from_utf8(s); }

Alphabet ab_alpha() {
    return Alphabet::custom(CharSet::from_intervals({{'a', 'a'}, {'b', 'b'}}));
}

// The running example: y = zu, y = xx, z in {b}, u in {a}.
struct SquareProblem {
    std::shared_ptr<VarTable> vars = std::make_shared<VarTable>();
    VarId y, z, u, x;
    Sequent root;

    SquareProblem() {
        y = vars->intern("y");
        z = vars->intern("z");
        u = vars->intern("u");
        x = vars->intern("x");
        std::vector<EquationalConstraint> eqs;
        eqs.push_back(make_equation(0, y, StringFunction{ConcatTerm{{z, u}}}));
        eqs.push_back(make_equation(1, y, StringFunction{ConcatTerm{{x, x}}}));
        root = make_sequent(vars, ab_alpha(), std::move(eqs));
        root = add_constraint(root, z, singleton(W("b"))).first;
        root = add_constraint(root, u, singleton(W("a"))).first;
    }
};

} // namespace

TEST_CASE("add_constraint reports language changes") {
    auto vars = std::make_shared<VarTable>();
    VarId x = vars->intern("x");
    Sequent s = make_sequent(vars, ab_alpha(), {});

    Nfa astar = compile_regex(re::star(re::lit("a")), s.alpha);
    auto [s1, ch1] = add_constraint(s, x, astar);
    CHECK(ch1);

    auto [s2, ch2] = add_constraint(s1, x, astar);
    CHECK(!ch2);

    // Intersecting disjoint infinite languages empties the constraint.
    VarId v = vars->intern("v");
    Nfa tens = compile_regex(re::plus(re::lit("ab")), s.alpha);
    Nfa ones = compile_regex(re::plus(re::lit("ba")), s.alpha);
    auto [s3, ch3] = add_constraint(s2, v, tens);
    auto [s4, ch4] = add_constraint(s3, v, ones);
    CHECK(ch3);
    CHECK(ch4);
    CHECK(try_close(s4).has_value());
    CHECK(try_close(s4)->first == v);
    CHECK(try_close(s4)->second.closed);

    // Re-adding the universal language on a fresh variable changes nothing.
    VarId w = vars->intern("w");
    auto [s5, ch5] = add_constraint(s, w, universal(s.alpha));
    CHECK(!ch5);
    CHECK(!try_close(s5).has_value());
}

TEST_CASE("apply_fwd pushes the image onto the lhs") {
    SquareProblem p;
    auto [s1, changed] = apply_fwd(p.root, 0);
    CHECK(changed);
    auto lang = as_singleton(constraint_of(s1, p.y));
    REQUIRE(lang.has_value());
    CHECK(*lang == W("ba"));

    CHECK_THROWS_AS(apply_fwd(p.root, 1), NotForwardable);
}

TEST_CASE("fwd through reverse on universal constraints changes nothing") {
    auto vars = std::make_shared<VarTable>();
    VarId a = vars->intern("a");
    VarId b = vars->intern("b");
    std::vector<EquationalConstraint> eqs;
    eqs.push_back(make_equation(0, a, StringFunction{ReverseFn{}}, {b}));
    Sequent s = make_sequent(vars, ab_alpha(), std::move(eqs));
    auto [s1, changed] = apply_fwd(s, 0);
    CHECK(!changed);
    CHECK(is_universal_lang(constraint_of(s1, a), s.alpha));
}

TEST_CASE("apply_bwd splits into the expected branches") {
    SquareProblem p;
    Sequent s = apply_fwd(p.root, 0).first;

    auto children = apply_bwd(s, 1);
    REQUIRE(children.size() == 2);
    for (auto& [child, changed] : children) {
        CHECK(changed);
        // Both branches force x into an empty language.
        CHECK(!is_empty(constraint_of(child, p.x)).has_value());
        CHECK(try_close(child).has_value());
    }
}

TEST_CASE("bwd through reverse keeps a universal argument universal") {
    auto vars = std::make_shared<VarTable>();
    VarId a = vars->intern("a");
    VarId b = vars->intern("b");
    std::vector<EquationalConstraint> eqs;
    eqs.push_back(make_equation(0, a, StringFunction{ReverseFn{}}, {b}));
    Sequent s = make_sequent(vars, ab_alpha(), std::move(eqs));
    auto children = apply_bwd(s, 0);
    REQUIRE(children.size() == 1);
    CHECK(!children[0].second);
    CHECK(is_universal_lang(constraint_of(children[0].first, b), s.alpha));
}

TEST_CASE("operations on closed sequents throw") {
    SquareProblem p;
    Sequent closed = p.root;
    closed.closed = true;
    CHECK_THROWS_AS(add_constraint(closed, p.x, singleton(W("a"))), LeafClosed);
    CHECK_THROWS_AS(apply_fwd(closed, 0), LeafClosed);
    CHECK_THROWS_AS(apply_bwd(closed, 1), LeafClosed);
}

TEST_CASE("tree expansion follows the clock discipline") {
    SquareProblem p;
    ProofTree t = make_tree(p.root);
    CHECK(t.prop_ceiling == 4);
    REQUIRE(t.open_leaves.size() == 1);
    // Forward entry only for the linear equation.
    const auto& clocks0 = t.node(0).prop_clocks;
    CHECK(clocks0.size() == 3);
    CHECK(clocks0.count({0, PropDir::fwd}) == 1);
    CHECK(clocks0.count({1, PropDir::fwd}) == 0);

    auto e1 = expand(std::move(t), 0, PropRule{0, PropDir::fwd});
    REQUIRE(e1.children.size() == 1);
    uint32_t mid = e1.children[0];
    {
        const auto& c = e1.tree.node(mid).prop_clocks;
        CHECK(c.at({0, PropDir::fwd}) == 0);
        CHECK(c.at({0, PropDir::bwd}) == 1);
        CHECK(c.at({1, PropDir::bwd}) == 1);
        CHECK(e1.tree.node(mid).branch_clock == 0);
        CHECK(e1.tree.node(mid).branch_bound == 1);
        CHECK(e1.tree.node(mid).changed);
    }

    auto e2 = expand(std::move(e1.tree), mid, PropRule{1, PropDir::bwd});
    REQUIRE(e2.children.size() == 2);
    for (uint32_t kid : e2.children) {
        const auto& c = e2.tree.node(kid).prop_clocks;
        CHECK(c.at({0, PropDir::fwd}) == 1);
        CHECK(c.at({0, PropDir::bwd}) == 2);
        CHECK(c.at({1, PropDir::bwd}) == 0);
        CHECK(e2.tree.node(kid).branch_bound == 2);
        CHECK(e2.tree.node(kid).label.branch_count == 2);
    }

    // Closing one branch leaves the sibling's annotations untouched.
    uint32_t left = e2.children[0], right = e2.children[1];
    auto e3 = expand(std::move(e2.tree), left, std::nullopt);
    CHECK(e3.tree.node(e3.children[0]).is_bot);
    CHECK(e3.tree.node(right).branch_clock == 0);
    CHECK(!e3.tree.closed());

    auto e4 = expand(std::move(e3.tree), right, std::nullopt);
    CHECK(e4.tree.closed());
    CHECK(e4.tree.nodes.size() == 6);

    CHECK_THROWS_AS(expand(e4.tree, right, std::nullopt), LeafClosed);
    CHECK_THROWS_AS(expand(e4.tree, 0, PropRule{0, PropDir::fwd}), LeafClosed);
}

TEST_CASE("branch clocks advance on other leaves and saturate") {
    SquareProblem p;
    ProofTree t = make_tree(p.root);
    t = expand(std::move(t), 0, PropRule{0, PropDir::fwd}).tree;
    auto e = expand(std::move(t), 1, PropRule{1, PropDir::bwd});
    uint32_t left = e.children[0], right = e.children[1];

    // Expanding the left leaf bumps the right leaf's branch clock.
    auto e2 = expand(std::move(e.tree), left, PropRule{0, PropDir::fwd});
    CHECK(e2.tree.node(right).branch_clock == 1);

    // Further expansions saturate at the recorded bound.
    uint32_t cur = e2.children[0];
    ProofTree tree = std::move(e2.tree);
    for (int i = 0; i < 4; ++i) {
        auto en = expand(std::move(tree), cur, PropRule{0, PropDir::fwd});
        cur = en.children[0];
        tree = std::move(en.tree);
    }
    CHECK(tree.node(right).branch_clock == tree.node(right).branch_bound);

    // Prop clocks saturate at the ceiling.
    CHECK(tree.node(cur).prop_clocks.at({1, PropDir::bwd}) == tree.prop_ceiling);
}

TEST_CASE("empty preimage relation synthesizes the closing child") {
    auto vars = std::make_shared<VarTable>();
    VarId y = vars->intern("y");
    VarId x = vars->intern("x");
    std::vector<EquationalConstraint> eqs;
    eqs.push_back(make_equation(0, y, StringFunction{ConcatTerm{{x, x}}}));
    Sequent s = make_sequent(vars, ab_alpha(), std::move(eqs));
    s = add_constraint(s, y, empty_lang()).first;

    auto children = apply_bwd(s, 0);
    CHECK(children.empty());

    ProofTree t = make_tree(s);
    auto e = expand(std::move(t), 0, PropRule{0, PropDir::bwd});
    REQUIRE(e.children.size() == 1);
    const ProofNode& child = e.tree.node(e.children[0]);
    CHECK(child.label.branch_count == 0);
    CHECK(!is_empty(constraint_of(child.seq, y)).has_value());
    CHECK(try_close(child.seq).has_value());
}

TEST_CASE("dot export is stable and shows the derivation") {
    SquareProblem p;
    ProofTree t = make_tree(p.root);
    t = expand(std::move(t), 0, PropRule{0, PropDir::fwd}).tree;
    auto e = expand(std::move(t), 1, PropRule{1, PropDir::bwd});
    t = std::move(e.tree);
    t = expand(std::move(t), e.children[0], std::nullopt).tree;
    t = expand(std::move(t), e.children[1], std::nullopt).tree;

    std::string dot = export_dot(t);
    CHECK(dot == export_dot(t));
    CHECK(dot.find("Fwd-Prop eq0") != std::string::npos);
    CHECK(dot.find("Bwd-Prop eq1 [1/2]") != std::string::npos);
    CHECK(dot.find("Bwd-Prop eq1 [2/2]") != std::string::npos);
    CHECK(dot.find("Close") != std::string::npos);
    CHECK(dot.find("y = \\\"ba\\\"") != std::string::npos);

    // Single-node tree renders one node and no edges.
    std::string small = export_dot(make_tree(p.root));
    CHECK(small.find("n0") != std::string::npos);
    CHECK(small.find("->") == std::string::npos);
}

TEST_CASE("validate_proof accepts the derivation and catches tampering") {
    SquareProblem p;
    ProofTree t = make_tree(p.root);
    t = expand(std::move(t), 0, PropRule{0, PropDir::fwd}).tree;
    auto e = expand(std::move(t), 1, PropRule{1, PropDir::bwd});
    t = std::move(e.tree);
    uint32_t left = e.children[0], right = e.children[1];
    t = expand(std::move(t), left, std::nullopt).tree;
    t = expand(std::move(t), right, std::nullopt).tree;

    std::string why;
    CHECK(validate_proof(t, 6, &why));

    // An open tree never validates.
    ProofTree open = make_tree(p.root);
    CHECK(!validate_proof(open, 6, &why));

    // Pretend a branch constrained x to a nonempty language: the close step
    // below it no longer has an empty constraint to point at.
    ProofTree bad = t;
    auto tampered = bad.nodes[left].seq;
    tampered.constraints[p.x] = std::make_shared<const Nfa>(singleton(W("ab")));
    bad.nodes[left].seq = tampered;
    bad.nodes[bad.nodes[left].children[0]].seq = tampered;
    CHECK(!validate_proof(bad, 6, &why));
    CHECK(!why.empty());

    // Swapping the root's y constraint to something the image step would
    // not produce is caught by the replay.
    ProofTree bad2 = t;
    auto root_seq = bad2.nodes[0].seq;
    root_seq.constraints[p.z] = std::make_shared<const Nfa>(singleton(W("a")));
    bad2.nodes[0].seq = root_seq;
    CHECK(!validate_proof(bad2, 6, &why));
}
