#include "doctest.h"

#include "srp/errors.hpp"
#include "srp/lossnet.hpp"
#include "srp/parallel.hpp"
#include "srp/rng.hpp"

using namespace srp;

TEST_CASE("parallel reduction does not depend on the number of jobs") {
  const Environment env(Box(Site{0}, Site{3}), 0.5, 0, {{Site{0}, 2}, {Site{1}, 1}, {Site{3}, 1}});
  const auto inst = make_instance(env, env.box(), BoundarySpec::identity(), 0.5, Potential::quadratic(1));
  using Seq = std::vector<GasConfig>;
  auto run = [&](int jobs) {
    return parallel_reduce(
        std::size_t{103}, jobs, Seq{},
        [&](std::size_t lo, std::size_t hi) {
          Seq out;
          for (std::size_t i = lo; i < hi; ++i) out.push_back(perfect_sample(inst, derive_seed(4, i)).sample);
          return out;
        },
        [](Seq& a, Seq b) { a.insert(a.end(), b.begin(), b.end()); });
  };
  const Seq one = run(1);
  CHECK(one.size() == 103);
  CHECK(run(2) == one);
  CHECK(run(7) == one);
  CHECK(run(200) == one);
}

TEST_CASE("parallel reduction rethrows worker errors") {
  auto body = [](std::size_t lo, std::size_t) -> int {
    if (lo > 0) throw Error(ErrorKind::contract, "boom");
    return 1;
  };
  CHECK_THROWS_AS(parallel_reduce(std::size_t{10}, 3, 0, body, [](int& a, int b) { a += b; }), Error);
  CHECK(parallel_reduce(std::size_t{0}, 3, 5, [](std::size_t, std::size_t) { return 1; },
                        [](int& a, int b) { a += b; }) == 6);
}
