public class SearchAgencyBean {
    public void assignSearch(Search search) {
        searchStore.assign(search);
    }
    public void removeAgency(Agency agency) {
        agencyStore.remove(agency);
    }
    public void removeAgency(Agency agency) {
        agencyStore.remove(agency);
    }
    public void editSearch(Search search) {
        searchStore.edit(search);
    }
}
