// Copyright 2026 The harbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

namespace harbench {

/// OpenBLAS picks its kernels when the library is loaded, and on some
/// virtual machines its CPU probe falls back to a generic SSE3 core that is
/// several times slower. When OPENBLAS_CORETYPE is unset and the CPU reports
/// AVX-512 or AVX2, this sets the matching core type and re-executes the
/// current binary once. Call it first thing in main(). Returns normally when
/// nothing needs to change or the re-exec is not possible.
void select_blas_core(char** argv);

}  // namespace harbench
