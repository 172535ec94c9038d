#include "qpsh/quaternion.hpp"

#include <ostream>

namespace qpsh {

std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
  return os << '[' << q.t << ", " << q.x << ", " << q.y << ", " << q.z << ']';
}

}  // namespace qpsh
