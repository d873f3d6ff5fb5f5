# Lifetimes of multiparty distillable entanglement under local depolarizing noise
