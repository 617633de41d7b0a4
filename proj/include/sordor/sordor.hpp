// Copyright 2026 The Sordor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SORDOR_SORDOR_HPP
#define SORDOR_SORDOR_HPP

#include "sordor/ensemble.hpp"
#include "sordor/expm.hpp"
#include "sordor/grape.hpp"
#include "sordor/io.hpp"
#include "sordor/morph.hpp"
#include "sordor/optimize.hpp"
#include "sordor/parallel.hpp"
#include "sordor/pauli.hpp"
#include "sordor/sequence.hpp"
#include "sordor/step.hpp"
#include "sordor/targets.hpp"
#include "sordor/types.hpp"
#include "sordor/waveform.hpp"

#endif  // SORDOR_SORDOR_HPP
