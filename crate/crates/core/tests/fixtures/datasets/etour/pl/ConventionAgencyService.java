public class ConventionAgencyService {
    public void submitAgency(Agency agency) {
        agencyStore.submit(agency);
    }
    public void listAgency(Agency agency) {
        agencyStore.list(agency);
    }
}
