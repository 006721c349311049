// Copyright 2026 The ltvmor Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "ltvmor/bt.hpp"
#include "ltvmor/dle.hpp"
#include "ltvmor/errors.hpp"
#include "ltvmor/expr.hpp"
#include "ltvmor/h2norm.hpp"
#include "ltvmor/ltv.hpp"
#include "ltvmor/timegrid.hpp"
#include "ltvmor/tsia.hpp"
