#ifndef SHADOWBOOT_SHADOWBOOT_HPP_
#define SHADOWBOOT_SHADOWBOOT_HPP_

#include "shadowboot/bootstrap.hpp"
#include "shadowboot/distfit.hpp"
#include "shadowboot/estimate.hpp"
#include "shadowboot/pauli.hpp"
#include "shadowboot/qsim.hpp"
#include "shadowboot/risk.hpp"
#include "shadowboot/shadow.hpp"
#include "shadowboot/snapshot_io.hpp"

#endif // SHADOWBOOT_SHADOWBOOT_HPP_
