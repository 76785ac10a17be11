// Compiles every public header in one translation unit so that missing
// includes and non-inline definitions surface at build time.
#include "mlcx/syntax.hpp"
#include "mlcx/globular.hpp"
#include "mlcx/kernel.hpp"
#include "mlcx/derived.hpp"
#include "mlcx/semantics.hpp"
#include "mlcx/relevance.hpp"
#include "mlcx/enumerate.hpp"
#include "mlcx/monad.hpp"
#include "mlcx/harness.hpp"
