// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef RISPILOT_RISPILOT_HPP
#define RISPILOT_RISPILOT_HPP

#include "rispilot/beamforming.hpp"
#include "rispilot/channels.hpp"
#include "rispilot/estimation.hpp"
#include "rispilot/phase_optimizer.hpp"
#include "rispilot/placement.hpp"
#include "rispilot/types.hpp"

#include "rispilot/harness/config.hpp"
#include "rispilot/harness/experiment.hpp"
#include "rispilot/harness/results_io.hpp"
#include "rispilot/harness/topology.hpp"

#endif // RISPILOT_RISPILOT_HPP
