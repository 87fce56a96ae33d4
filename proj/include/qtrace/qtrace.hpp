#pragma once

#include "qtrace/asymptotics.hpp"
#include "qtrace/contraction.hpp"
#include "qtrace/error.hpp"
#include "qtrace/laurent.hpp"
#include "qtrace/pairing.hpp"
#include "qtrace/qnum.hpp"
#include "qtrace/report.hpp"
#include "qtrace/spine.hpp"
#include "qtrace/summation.hpp"
#include "qtrace/torus_skein.hpp"
