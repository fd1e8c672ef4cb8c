#pragma once

#include <cstdint>
#include <string>

#include "symlift/mln.hpp"
#include "symlift/model.hpp"

namespace fixtures {

std::string data_path(const std::string& name);

symlift::Model ex1();
symlift::Model triangle();
symlift::Model frucht();
symlift::Model complete3();
symlift::Model unary();

symlift::mln::Mln lovers_smokers();
symlift::mln::Mln q2();
symlift::mln::Mln friends_smokers();

/// Pairwise model invariant under a random permutation sigma: every orbit of
/// oriented edges under <sigma> shares one table and tie class, and every
/// variable orbit gets a tied unary feature. Small integer tables.
symlift::Model random_symmetric_pairwise(std::uint64_t seed, int n);

/// The 20 seeded random models used across tests (n between 4 and 8).
symlift::Model random_model(int k);

}  // namespace fixtures
