#pragma once

#include "constructors.hpp"
#include "core.hpp"
#include "distchaos.hpp"
#include "errors.hpp"
#include "gallery.hpp"
#include "pwl.hpp"
#include "seqdensity.hpp"
#include "symbolic.hpp"
#include "util.hpp"
