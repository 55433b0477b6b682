#pragma once

#include <cstddef>
#include <string>

// Dense double-precision primitives used by the solver inner loops.
// Scalar reference kernels plus an AVX2/FMA variant, selected once at
// runtime from CPU capabilities. The two lanes are equivalence-tested;
// force_isa() pins the lane for tests and reproducibility experiments.
namespace pivotal::kernels {

enum class Isa { scalar, avx2 };

Isa active_isa();
void force_isa(Isa isa);
void reset_isa();  // back to auto-detection
std::string isa_name(Isa isa);

double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double nrm2sq(const double* a, std::size_t n);
double sum(const double* a, std::size_t n);
double max_abs(const double* a, std::size_t n);

// Reference implementations, exposed so tests can compare lanes.
namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double nrm2sq(const double* a, std::size_t n);
double sum(const double* a, std::size_t n);
double max_abs(const double* a, std::size_t n);
}  // namespace scalar

}  // namespace pivotal::kernels
