#pragma once

// Umbrella header: the whole library in one include.

#include "prefact/engine.hpp"
#include "prefact/error.hpp"
#include "prefact/fixtures.hpp"
#include "prefact/ingest.hpp"
#include "prefact/lexicon.hpp"
#include "prefact/oracles.hpp"
#include "prefact/profilestore.hpp"
#include "prefact/reliability.hpp"
#include "prefact/retrieval.hpp"
#include "prefact/server.hpp"
#include "prefact/sourcefeat.hpp"
#include "prefact/stance.hpp"
#include "prefact/textfeat.hpp"
#include "prefact/unicode.hpp"
#include "prefact/util.hpp"
#include "prefact/verdict.hpp"
#include "prefact/version.hpp"
