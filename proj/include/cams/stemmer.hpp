#ifndef CAMS_STEMMER_HPP
#define CAMS_STEMMER_HPP

#include <string>

namespace cams {

// Classic Porter (1980) stemmer for lowercase ASCII words. Non-alphabetic or
// non-ASCII input is returned unchanged.
std::string porter_stem(const std::string& word);

}  // namespace cams

#endif
