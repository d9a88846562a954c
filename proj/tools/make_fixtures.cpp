// Regenerates the machine-written fixtures under fixtures/.  The hand-written
// malformed fixtures (bad-json.json etc.) are not touched.
#include <iostream>
#include <string>

#include "teplab/io.hpp"
#include "teplab/quantum.hpp"
#include "teplab/samples.hpp"

using namespace teplab;

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: teplab-make-fixtures <fixtures-dir>\n";
        return 2;
    }
    std::string dir = argv[1];
    auto put = [&](const std::string& name, const std::string& text) {
        write_file(dir + "/" + name, text);
        std::cout << name << "\n";
    };

    put("s2.json", serialize_connection(build_quantum(preset("s2"), 8).E));
    put("quadric-intersection-cp5.json",
        serialize_connection(build_quantum(preset("quadric-intersection-cp5"), 8).E));

    // s2 with a symmetry-breaking order-1 perturbation: polarization fails at 1.
    {
        EStructure bad = build_quantum(preset("s2"), 8).E;
        bad.A[1](0, 0) += Scalar(1);
        put("bad-polarization.json", serialize_connection(bad));
    }

    // rank-4 reference pair for solve-isomorphism.
    {
        Matrix J(4, 4);
        J(0, 0) = Scalar(-8);
        J(1, 2) = Scalar(1);
        J(3, 3) = Scalar(8);
        Matrix N = Matrix::diagonal({Scalar(0), Scalar(1, 2), Scalar(-1, 2), Scalar(0)});
        Matrix M{{Scalar(0), Scalar(2, 3), Scalar(-1, 4), Scalar(0)},
                 {Scalar(9, 16), Scalar(1), Scalar(0), Scalar(-9, 16)},
                 {Scalar(-3, 2), Scalar(0), Scalar(-1), Scalar(-3, 2)},
                 {Scalar(0), Scalar(-2, 3), Scalar(-1, 4), Scalar(0)}};
        EStructure E = EStructure::zero(4, 8);
        E.field = Field::Q;
        E.A[0] = J;
        E.A[1] = N;
        put("iso-from.json", serialize_connection(E));
        E.A[1] = M;
        put("iso-to.json", serialize_connection(E));
    }

    // resonant endpoint: solving against itself leaves a free direction.
    {
        EStructure E = EStructure::zero(2, 4);
        E.field = Field::Q;
        E.A[1] = Matrix::diagonal({Scalar(0), Scalar(1)});
        put("nonunique.json", serialize_connection(E));
    }

    // mismatched residues: no formal isomorphism exists.
    {
        EStructure A = EStructure::zero(1, 4);
        A.field = Field::Q;
        put("mismatch-a.json", serialize_connection(A));
        EStructure B = A;
        B.A[0](0, 0) = Scalar(1);
        put("mismatch-b.json", serialize_connection(B));
    }

    // residue with irrational eigenvalues (w^2 = 2).
    {
        EStructure E = EStructure::zero(2, 2);
        E.field = Field::Q;
        E.A[0] = Matrix{{Scalar(0), Scalar(2)}, {Scalar(1), Scalar(0)}};
        put("irrational.json", serialize_connection(E));
    }

    put("matrix2.json", serialize_ainfty(samples::matrix2()));
    put("exterior-t.json", serialize_ainfty(samples::exterior_t()));
    return 0;
}
