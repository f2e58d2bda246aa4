#pragma once

#include "thinsw/ansatz.hpp"
#include "thinsw/config.hpp"
#include "thinsw/driver.hpp"
#include "thinsw/fields/norms.hpp"
#include "thinsw/io/report.hpp"
#include "thinsw/lagrangian.hpp"
#include "thinsw/ns_residual.hpp"
#include "thinsw/shallow_water.hpp"
#include "thinsw/study.hpp"
#include "thinsw/thin/elliptic.hpp"
#include "thinsw/thin/korn.hpp"
#include "thinsw/thin/probes.hpp"
