// Copyright 2026 The Parrot Authors
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


#ifndef PARROT_PARROT_HPP
#define PARROT_PARROT_HPP

#include "parrot/codegen.hpp"
#include "parrot/core.hpp"
#include "parrot/error.hpp"
#include "parrot/examples.hpp"
#include "parrot/flow.hpp"
#include "parrot/program_doc.hpp"
#include "parrot/selector.hpp"
#include "parrot/simulator.hpp"
#include "parrot/solution.hpp"
#include "parrot/templates.hpp"

#endif  // PARROT_PARROT_HPP
