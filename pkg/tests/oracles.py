"""Reference values frozen from independent high-precision computations.

Generated once with mpmath at 60 significant digits (quadrature on the
defining integrals, contour rotation for the chirp symbol) and cross-checked
against Lommel / Weber closed forms; they are constants here so the test
suite does not depend on the generator.
"""

# (nu, x, J_nu(x))
BESSEL_J = [(0, 0.1, 0.99750156206604), (0, 1.0, 0.7651976865579666), (0, 5.0, -0.1775967713143383),
 (0, 20.0, 0.16702466434058316), (0, 50.0, 0.055812327669251816),
 (0, 100.0, 0.019985850304223122), (0.5, 0.1, 0.25189294032600096),
 (0.5, 1.0, 0.6713967071418031), (0.5, 5.0, -0.3421679847981618),
 (0.5, 20.0, 0.16288076385502986), (0.5, 50.0, -0.029605831888924614),
 (0.5, 100.0, -0.04040213271625212), (1, 0.1, 0.049937526036242), (1, 1.0, 0.4400505857449335),
 (1, 5.0, -0.32757913759146523), (1, 20.0, 0.06683312417585005),
 (1, 50.0, -0.09751182812517514), (1, 100.0, -0.07714535201411216),
 (2.5, 0.1, 0.0001680887190033413), (2.5, 1.0, 0.04949681022847794),
 (2.5, 5.0, 0.24037720111131736), (2.5, 20.0, -0.17258019384387643),
 (2.5, 50.0, 0.02303721950962553), (2.5, 100.0, 0.038325919332375405),
 (10, 0.1, 2.690532895434217e-20), (10, 1.0, 2.6306151236874534e-10),
 (10, 5.0, 0.0014678026473104741), (10, 20.0, 0.1864825580239451),
 (10, 50.0, -0.11384784914946938), (10, 100.0, -0.05473217693547201),
 (30.5, 0.1, 1.4156661705414753e-73), (30.5, 1.0, 4.441688720519071e-43),
 (30.5, 5.0, 7.640922263659723e-22), (30.5, 20.0, 7.516007119506954e-05),
 (30.5, 50.0, -0.008432791933293549), (30.5, 100.0, 0.0694209716095889)]

# gamma_a(n), a = exp(-r^2/2), d = 2
GAMMA_GAUSS_D2 = [(0, 1.4632269615550457), (1, 0.6531698334674466), (2, 0.15688729462015238),
 (5, 0.00031373739380003075), (10, 3.1816573421927827e-10)]

# gamma_a(n), a = exp(-r), d = 2
GAMMA_EXP_D2 = [(0, 1.054073432638252), (1, 0.5716572389681664), (2, 0.26772313589424257),
 (5, 0.02111452570249699), (10, 0.00023247322033673445)]

# gamma_a(n), a = indicator of [0, 1], d = 3
GAMMA_INDICATOR_D3 = [(0, 0.5453512865871591), (1, 0.03850187686569846), (2, 0.0011358475412493246),
 (5, 1.3317923341500562e-09), (10, 4.419333431712939e-22), (20, 2.6454501700587964e-52)]

# gamma_a(n), a = sin(r^2/4), d = 3 (contour integral)
GAMMA_CHIRP_D3 = [(0, 1.124023661584884), (1, 2.8931277103636326), (2, -0.49062096460982624),
 (3, -0.40348571691240964)]

# 2 pi cos(1 - pi nu/2) J_nu(2): the printed closed form, which does NOT match
GAMMA_CHIRP_D3_PRINTED_FORM = [(0, 3.149435292754351), (1, 0.6573791706012551), (2, -1.3746854573583025),
 (3, -0.091680400067785)]

# (x, log Gamma(x))
LOG_GAMMA = [(0.5, 0.5723649429247001), (1.5, -0.12078223763524522), (7.25, 7.0521854507385395),
 (100.5, 361.4355404677776)]

