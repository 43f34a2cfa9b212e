#ifndef BDLS_TESTS_HELPERS_HPP
#define BDLS_TESTS_HELPERS_HPP

#include <initializer_list>
#include <vector>

namespace bdls_tests {

inline std::vector<double> ts(std::initializer_list<double> values) {
  return std::vector<double>(values);
}

}  // namespace bdls_tests

#endif
