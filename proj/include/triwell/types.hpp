#pragma once

// The organization-center taxonomy shared by the quantum classifier and the
// mean-field trajectory classifier.

#include <string>

namespace triwell {

enum class Center { A, B, C, D, E1, E2, UNASSIGNED };

inline std::string to_string(Center c) {
	switch(c) {
	case Center::A: return "A";
	case Center::B: return "B";
	case Center::C: return "C";
	case Center::D: return "D";
	case Center::E1: return "E1";
	case Center::E2: return "E2";
	default: return "--";
	}
}

}  // namespace triwell
