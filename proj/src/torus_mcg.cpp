#include "flowcob/torus_mcg.hpp"

#include <cstdlib>

namespace flowcob {

std::string Mat2::str() const {
    return std::to_string(a) + "," + std::to_string(b) + ";" + std::to_string(c) + "," +
           std::to_string(d);
}

Mat2 operator*(const Mat2& x, const Mat2& y) {
    return Mat2{x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

Mat2 twist_matrix(TwistGen g) {
    return g == TwistGen::G1 ? Mat2{1, 1, 0, 1} : Mat2{1, 0, -1, 1};
}

namespace {

Mat2 twist_power(TwistGen g, int sign) {
    Mat2 m = twist_matrix(g);
    if (sign < 0) m = Mat2{m.d, -m.b, -m.c, m.a};  // inverse of a det-1 matrix
    return m;
}

}  // namespace

TorusMarking apply_twist(const TorusMarking& m, TwistGen g, int sign) {
    return TorusMarking{m.m * twist_power(g, sign)};
}

Mat2 evaluate(const TwistWord& w) {
    Mat2 acc;
    for (const TwistLetter& l : w) acc = acc * twist_power(l.gen, l.sign);
    return acc;
}

TwistWord decompose(const Mat2& target) {
    if (target.det() != 1)
        throw Error(Errc::NotUnimodular, "determinant " + std::to_string(target.det()) + " != 1");

    // Reduce to the identity by multiplying on the left with generator
    // powers.  If L_k ... L_1 * target == I then
    //   target == inv(L_1) * inv(L_2) * ... * inv(L_k),
    // so collecting inv(L_i) in application order is already the word.
    Mat2 m = target;
    TwistWord letters;
    auto lmul = [&](TwistGen g, int sign) {
        m = twist_power(g, sign) * m;
        letters.push_back(TwistLetter{g, -sign});
    };

    // Euclidean descent on the first column (a, c) until c == 0.
    // G1^s adds s*row2 to row1; G2^s subtracts s*row1 from row2.
    while (m.c != 0) {
        if (m.a == 0) {
            lmul(TwistGen::G1, 1);  // a <- c, which is nonzero
            continue;
        }
        if (std::abs(m.a) > std::abs(m.c)) {
            std::int64_t q = m.a / m.c;
            for (std::int64_t i = 0; i < std::abs(q); ++i) lmul(TwistGen::G1, q > 0 ? -1 : 1);
        } else {
            std::int64_t q = m.c / m.a;  // |q| >= 1, so c shrinks
            for (std::int64_t i = 0; i < std::abs(q); ++i) lmul(TwistGen::G2, q > 0 ? 1 : -1);
        }
    }

    // Now m = [[±1, b], [0, ±1]] with matching diagonal signs (det 1).
    while (m.b != 0) lmul(TwistGen::G1, (m.b > 0) == (m.d > 0) ? -1 : 1);
    if (m.a == -1) {
        // multiply by (G1 G2 G1)^2 = -I
        for (int i = 0; i < 2; ++i) {
            lmul(TwistGen::G1, 1);
            lmul(TwistGen::G2, 1);
            lmul(TwistGen::G1, 1);
        }
    }

    return letters;
}

std::string marking_form(const TorusMarking& m) { return "TM:" + m.m.str(); }

Trace torus_cobordism_trace(const TorusMarking& a, const TorusMarking& b) {
    if (a.m.det() != 1 || b.m.det() != 1)
        throw Error(Errc::NotUnimodular, "markings must have determinant +1");
    // a * w = b  =>  w = a^-1 * b
    Mat2 ainv{a.m.d, -a.m.b, -a.m.c, a.m.a};
    TwistWord word = decompose(ainv * b.m);

    Trace tr;
    TorusMarking state = a;
    for (const TwistLetter& l : word) {
        Move mv;
        mv.kind = MoveKind::TwistMacro;
        mv.edge = l.gen == TwistGen::G1 ? 0 : 1;
        mv.direction = l.sign;
        TorusMarking next = apply_twist(state, l.gen, l.sign);
        tr.entries.push_back(TraceEntry{mv, marking_form(state), marking_form(next)});
        state = next;
    }
    return tr;
}

}  // namespace flowcob
