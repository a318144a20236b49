#pragma once

#include "zifazah/ast.hpp"
#include "zifazah/color.hpp"
#include "zifazah/diagnostic.hpp"
#include "zifazah/encoding.hpp"
#include "zifazah/fiber_model.hpp"
#include "zifazah/formatter.hpp"
#include "zifazah/geometry.hpp"
#include "zifazah/interpreter.hpp"
#include "zifazah/lexer.hpp"
#include "zifazah/numfmt.hpp"
#include "zifazah/parser.hpp"
#include "zifazah/render.hpp"
#include "zifazah/session.hpp"
#include "zifazah/synthetic.hpp"
#include "zifazah/tessellate.hpp"
#include "zifazah/update_rules.hpp"
#include "zifazah/zfz_format.hpp"
