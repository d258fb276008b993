#ifndef JOS_BESSEL_HPP
#define JOS_BESSEL_HPP

namespace jos {

// Bessel function of the first kind, integer order.  Ascending series for
// |x| <= 12, Miller downward recurrence with even-sum normalization beyond;
// relative accuracy around 1e-12 across the range used here.
double bessel_j(int n, double x);

}  // namespace jos

#endif
