#include "homsim/types.hpp"

namespace homsim {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::Signal1: return "signal1";
    case Provenance::Signal2: return "signal2";
    case Provenance::Dark: return "dark";
    case Provenance::Background: return "background";
  }
  return "unknown";
}

const char* to_string(Detector d) {
  return d == Detector::C ? "C" : "D";
}

}  // namespace homsim
