#pragma once

#include "hitchin/error.hpp"
#include "hitchin/foliation.hpp"
#include "hitchin/frenet.hpp"
#include "hitchin/group.hpp"
#include "hitchin/io.hpp"
#include "hitchin/linalg.hpp"
#include "hitchin/planar.hpp"
#include "hitchin/poly.hpp"
#include "hitchin/projlin.hpp"
#include "hitchin/regularity.hpp"
#include "hitchin/spectra.hpp"
#include "hitchin/tolerances.hpp"
