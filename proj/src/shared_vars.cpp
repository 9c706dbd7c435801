#include "tdma/shared_vars.hpp"

namespace tdma {

SharedVars relay_view(const SharedVars& v) {
    SharedVars out = v;
    out.setcol.clear();
    out.spectrum.clear();
    return out;
}

}  // namespace tdma
