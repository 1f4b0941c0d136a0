#pragma once

#include <sstream>
#include <string>

namespace adaptopt {

template <class... Args>
std::string cat(const Args&... args) {
    std::ostringstream os;
    (os << ... << args);
    return os.str();
}

}  // namespace adaptopt
