#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flowcob/cobordism.hpp"

namespace flowcob {

/// Integer 2x2 matrix, row-major [[a,b],[c,d]].
struct Mat2 {
    std::int64_t a = 1, b = 0, c = 0, d = 1;

    std::int64_t det() const { return a * d - b * c; }
    bool operator==(const Mat2&) const = default;
    std::string str() const;
};

Mat2 operator*(const Mat2& x, const Mat2& y);

/// How the two loops of the reduced one-vertex torus skeleton sit in homology,
/// written in the basis of the fixed reference curves.  Columns are the two
/// loop classes; determinant +1 keeps the orientation.
struct TorusMarking {
    Mat2 m;

    static TorusMarking identity() { return TorusMarking{Mat2{}}; }
};

enum class TwistGen { G1, G2 };

struct TwistLetter {
    TwistGen gen;
    int sign;  // +1 or -1
    bool operator==(const TwistLetter&) const = default;
};

using TwistWord = std::vector<TwistLetter>;

// Fixed generator convention: G1 = [[1,1],[0,1]], G2 = [[1,0],[-1,1]].
Mat2 twist_matrix(TwistGen g);

// A twist along a skeleton loop acts by right multiplication.
TorusMarking apply_twist(const TorusMarking& m, TwistGen g, int sign);

// Product of the letters' matrices, left to right.
Mat2 evaluate(const TwistWord& w);

// Word with evaluate(word) == target, via Euclidean reduction of the first
// column, then clearing the upper-triangular rest with G1 powers; the sign is
// fixed with (G1 G2 G1)^2 = -I.  Throws Error(NotUnimodular).
TwistWord decompose(const Mat2& target);

// Word w with a * evaluate(w) == b, wrapped as twist moves on the two loops
// (edge 0 for G1, edge 1 for G2).  States are serialized markings.
Trace torus_cobordism_trace(const TorusMarking& a, const TorusMarking& b);

std::string marking_form(const TorusMarking& m);

}  // namespace flowcob
