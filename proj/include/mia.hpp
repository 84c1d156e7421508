//
// Copyright 2026 The mia-audit Authors
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
//

#ifndef MIA_MIA_HPP_
#define MIA_MIA_HPP_

#include "mia/attacks.hpp"
#include "mia/compress.hpp"
#include "mia/enrich.hpp"
#include "mia/experiment.hpp"
#include "mia/http_client.hpp"
#include "mia/jsonl.hpp"
#include "mia/metrics.hpp"
#include "mia/parallel.hpp"
#include "mia/random.hpp"
#include "mia/sample.hpp"
#include "mia/status.hpp"
#include "mia/synthetic.hpp"
#include "mia/text.hpp"

#endif  // MIA_MIA_HPP_
