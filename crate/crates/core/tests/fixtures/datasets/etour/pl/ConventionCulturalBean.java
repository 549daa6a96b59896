public class ConventionCulturalBean {
    public void submitConvention(Convention convention) {
        conventionStore.submit(convention);
    }
    public void listConvention(Convention convention) {
        conventionStore.list(convention);
    }
    public void approveConvention(Convention convention) {
        conventionStore.approve(convention);
    }
}
