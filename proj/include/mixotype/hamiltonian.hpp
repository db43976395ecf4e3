#pragma once

#include "mixotype/expr.hpp"

#include <array>
#include <cstddef>
#include <string_view>

namespace mixotype {

/// Hamiltonian density h(u, v) with every partial derivative through order 5
/// differentiated up front.
class HamiltonianDensity {
public:
    static constexpr int kMaxOrder = 5;

    explicit HamiltonianDensity(Expression h) {
        table_[index(0, 0)] = std::move(h);
        for (int order = 1; order <= kMaxOrder; ++order) {
            for (int i = 0; i <= order; ++i) {
                const int j = order - i;
                // d^{i}_u d^{j}_v h from a lower-order entry.
                table_[index(i, j)] = i > 0 ? table_[index(i - 1, j)].du() : table_[index(i, j - 1)].dv();
            }
        }
    }

    static HamiltonianDensity parse(std::string_view source) { return HamiltonianDensity(Expression::parse(source)); }

    const Expression& h() const { return table_[0]; }

    /// The partial derivative with `nu` u-derivatives and `nv` v-derivatives.
    const Expression& partial(int nu, int nv) const {
        if (nu < 0 || nv < 0 || nu + nv > kMaxOrder) throw DomainError("Hamiltonian partial beyond cached order");
        return table_[index(nu, nv)];
    }

    double operator()(int nu, int nv, Point p) const { return partial(nu, nv).evaluate(p); }

private:
    static constexpr std::size_t index(int i, int j) {
        const int order = i + j;
        return static_cast<std::size_t>(order * (order + 1) / 2 + i);
    }

    std::array<Expression, (kMaxOrder + 1) * (kMaxOrder + 2) / 2> table_{};
};

}  // namespace mixotype
