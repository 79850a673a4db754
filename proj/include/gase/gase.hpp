#pragma once

// Generatively Augmented Sentence Encoding: generate textual variants of an
// input at inference time, embed original and variants, pool the embeddings,
// and evaluate on STS / pair-classification / retrieval tasks.

#include "gase/augment.hpp"
#include "gase/cache.hpp"
#include "gase/config.hpp"
#include "gase/datasets.hpp"
#include "gase/embed_remote.hpp"
#include "gase/embedding.hpp"
#include "gase/error.hpp"
#include "gase/genclient.hpp"
#include "gase/metrics.hpp"
#include "gase/pooling.hpp"
#include "gase/prompts.hpp"
#include "gase/report.hpp"
#include "gase/runner.hpp"
