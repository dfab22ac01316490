"""Frozen oracle values; regenerate with make_oracles.py."""

LOGGAMMA = [(0.5, (0.5723649429247001+0j)),
 ((1+0j), 0j),
 (3.7, (1.428072326665388+0j)),
 ((10.2+3.1j), (12.767408328454477+7.096061704348502j)),
 ((-2.5+0.5j), (-0.9350856212982774-8.87096288524746j)),
 ((0.3-35j), (-54.76999680186821-89.12364195532078j)),
 ((-9.7+20j), (-61.4639996736232+21.395608315714412j)),
 ((25+0j), (54.78472939811232+0j))]

HYP2F1 = [((0.25, 0.75, 1.7, 0.6), (1.0913953168361772+0j)),
 (((0.5+1j), (0.5+1j), 1.0, 0.8), (0.008959332952374765-0.23174186785632536j)),
 ((1.1, 0.5, 3.2, 0.99), (1.329213691484617+0j)),
 ((0.25, 0.75, 2.1, 0.999), (1.1803655625762879+0j)),
 (((2-0.7j), 0.3, (1.5+0.2j), 0.45), (1.2367379728663648-0.17492119995338054j)),
 ((1.3, 2.4, 4.0, 0.97), (5.873075596071649+0j))]

CONICAL = [((0.0, 1.2), 0.9763155117905381),
 ((0.0, 3.0), 0.8346268416740732),
 ((0.0, 21.0), 0.5034846827357045),
 ((0.0, 201.0), 0.2344156542309132),
 ((0.3, 1.2), 0.967858881304201),
 ((0.3, 3.0), 0.7788564107259207),
 ((0.3, 21.0), 0.36921572204557107),
 ((0.3, 201.0), 0.09942153659769228),
 ((1.0, 1.2), 0.8844005605025876),
 ((1.0, 3.0), 0.3154998781504384),
 ((1.0, 21.0), -0.16555550446602085),
 ((1.0, 201.0), 0.020211885413474323),
 ((5.0, 1.2), -0.28484285057681047),
 ((5.0, 3.0), -0.03124794102957075),
 ((5.0, 21.0), 0.04375167279681693),
 ((5.0, 201.0), -0.015695200565876442),
 ((12.0, 1.2), 0.2622677061194759),
 ((12.0, 3.0), 0.00873556684444915),
 ((12.0, 21.0), 0.050177315054857084),
 ((12.0, 201.0), -0.007440135643161496)]

CONICAL_IMAG = [((0.25j, 1.5), 0.9586069193288396),
 ((0.25j, 4.0), 0.8361465906565264),
 (((-0-0.4j), 1.5), 0.9800201725665182),
 (((-0-0.4j), 4.0), 0.9193863910477391)]

LEGENDRE_Q = [((0.0, 3.0), (0.34657359027997264+0j)),
 ((1.0, 2.0), (0.09861228866810968+0j)),
 ((1.3, 1.05), (0.8060738890951382+0j)),
 ((1.3, 40.0), (5.178624440706165e-05+0j)),
 (((2+0.5j), 1.7), (0.03040546803680203-0.02310135168944003j)),
 (((0.5+10j), 1.3), (-0.08405204076939948-0.1848129121563979j)),
 ((4.0, 1.001), (1.744613965228334+0j))]

A_COEFF = [((1.5, 0.0), (8.885765876316732+0j)),
 ((1.5, 0.5), (6.708217502368521+1.7296952020369285e-31j)),
 ((1.5, 2.0), (0.7665460397498853-4.2354106071526306e-32j)),
 ((1.5, 10.0), (2.6782005361361096e-06+4.053091436121837e-39j)),
 ((2.0, 0.0), (5.323196806427823+0j)),
 ((2.0, 0.5), (4.568635837549815-1.1185110494057996e-31j)),
 ((2.0, 2.0), (0.9444146788063603+2.583878404626107e-32j)),
 ((2.0, 10.0), (7.5009257539733105e-06+1.8270455183638486e-37j)),
 ((3.0, 0.0), (2.9123736927084285+0j)),
 ((3.0, 0.5), (2.704777356536865-1.5310880445553218e-32j)),
 ((3.0, 2.0), (1.042273242647154+2.083917092112368e-33j)),
 ((3.0, 10.0), (3.764571807751612e-05+4.912291146704505e-37j)),
 ((4.5, 0.0), (1.723993676035773+0j)),
 ((4.5, 0.5), (1.6561481531343774-2.2448488634352763e-32j)),
 ((4.5, 2.0), (0.9379527409743703-3.034060470203316e-32j)),
 ((4.5, 10.0), (0.00021221550914908043-1.857412685530218e-36j))]

PLAIN_G_S_BETA = [((2.2, 3, 0.7), (0.31008987243865+0j)), ((3.0, 0.5, 2.0), (0.0595850644585221+0j))]

G_S_BETA = [((2.2, 3, 0.5), (0.4849212903318003+0j)),
 ((2.2, 3, 1.0), (0.6424979049900283+0j)),
 ((2.2, 3, 2.0), (0.20520100152241305+0j)),
 ((1.5, 0, 0.9), (2.562140266093284+0j)),
 ((3.0, 1.0, 0.2), (9.415684257993297+0j))]

G_TILDE = [((2.2, 3, 0.5), (0.2832920533732525+0j)),
 ((2.2, 3, 1.0), (0.541999158147756+0j)),
 ((2.2, 3, 2.0), (0.20081472779286652+0j)),
 ((2.3, 1.0, 0.3), (1.1829032659166636+0j))]

G_ELL = [((1.5, 0.9), 2.562140266093284), ((1.5, 0.2), 8.870076421811843), ((1.2, 3.0), 0.7056262320069956)]

HEAT_PLANE = [((0.0, 1.0), 0.057535755205721975),
 ((0.5, 0.7), 0.08108932961750612),
 ((1.0, 1.0), 0.04149118395782222),
 ((2.0, 0.5), 0.013668272010699109),
 ((4.0, 2.0), 0.0011472321619535638)]

LEGENDRE_Q_SPECTRAL = [((2.0, 1.0), 0.19116077815678637), ((1.7, 2.5), 0.02090474358414768), ((3.0, 0.3), 0.6014982143571628)]

E_PAR_FOURIER = [((1j, 2.0), 2.784201545330791),
 ((2j, 2.0), 4.872352704328884),
 (((0.3+0.8j), 2.5), 2.4420354678600114),
 (((0.5+0.9j), 3.0), 2.0401190504172173),
 (((-0.2+1.5j), 1.5), 4.072029331247991)]

E_PAR_CLOSED_I_2 = 2.784201545330791

E_PAR_LATTICE_I_2 = 2.7842015357814858

