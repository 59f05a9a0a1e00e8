#pragma once

#include "ergomax/campaign.hpp"
#include "ergomax/core.hpp"
#include "ergomax/cz.hpp"
#include "ergomax/ergodic.hpp"
#include "ergomax/generators.hpp"
#include "ergomax/io.hpp"
#include "ergomax/maximal.hpp"
#include "ergomax/rational.hpp"
#include "ergomax/report.hpp"
#include "ergomax/weights.hpp"
