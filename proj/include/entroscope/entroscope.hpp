// This file is part of entroscope.
//
// Licensed under the Apache License, Version 2.0. See the LICENSE file in
// the repository root for details.

#pragma once

#include "entroscope/approximator.hpp"
#include "entroscope/checks.hpp"
#include "entroscope/common.hpp"
#include "entroscope/counterexamples.hpp"
#include "entroscope/ensembles.hpp"
#include "entroscope/entropy.hpp"
#include "entroscope/io.hpp"
#include "entroscope/linalg.hpp"
#include "entroscope/ua_sweep.hpp"
