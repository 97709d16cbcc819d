// Copyright 2026 The qrc authors
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

#ifndef QRC_QRC_HPP
#define QRC_QRC_HPP

#include <qrc/circuit.hpp>
#include <qrc/common.hpp>
#include <qrc/experiments.hpp>
#include <qrc/gates.hpp>
#include <qrc/gateware.hpp>
#include <qrc/io.hpp>
#include <qrc/linalg.hpp>
#include <qrc/pauli.hpp>
#include <qrc/rc.hpp>
#include <qrc/rng.hpp>
#include <qrc/sim.hpp>

#endif
